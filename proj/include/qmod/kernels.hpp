// Hot loops with an OpenMP implementation and a serial reference.
#pragma once

#include "qmod/cyclotomic.hpp"

#include <cstdint>
#include <vector>

namespace qmod::kernels {

enum class Exec { Serial, Parallel, Auto };

// Terms of a sparse series laid out on an integer lattice: idx ascending,
// coef holds `width` integers per term.
struct SparseOperand {
    const std::int64_t* idx = nullptr;
    const BigInt* coef = nullptr;
    std::size_t n = 0;
    int width = 1;
};

// out has L*(2w-1) entries; out[s*(2w-1)+t] += sum over idx_a+idx_b = s of
// the coefficient of x^t in the polynomial product of the two blocks.
void convolve_serial(const SparseOperand& a, const SparseOperand& b, std::int64_t L, std::vector<BigInt>& out);
void convolve_parallel(const SparseOperand& a, const SparseOperand& b, std::int64_t L, std::vector<BigInt>& out);
void convolve(const SparseOperand& a, const SparseOperand& b, std::int64_t L, std::vector<BigInt>& out,
              Exec exec = Exec::Auto);

// Number of threads OpenMP would use for a parallel region here.
int available_threads();

}  // namespace qmod::kernels
