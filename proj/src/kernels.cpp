#include "qmod/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace qmod::kernels {

namespace {

inline void block_product(const BigInt* x, const BigInt* y, int w, BigInt* acc) {
    if (w == 1) {
        mpz_addmul(acc[0].get_mpz_t(), x[0].get_mpz_t(), y[0].get_mpz_t());
        return;
    }
    for (int u = 0; u < w; ++u) {
        if (mpz_sgn(x[u].get_mpz_t()) == 0) continue;
        for (int v = 0; v < w; ++v)
            if (mpz_sgn(y[v].get_mpz_t()) != 0)
                mpz_addmul(acc[u + v].get_mpz_t(), x[u].get_mpz_t(), y[v].get_mpz_t());
    }
}

// Accumulates the slots in [lo, hi).
void convolve_range(const SparseOperand& a, const SparseOperand& b, std::int64_t lo, std::int64_t hi,
                    std::vector<BigInt>& out) {
    const int w = a.width;
    const int ow = 2 * w - 1;
    const std::int64_t* bbeg = b.idx;
    const std::int64_t* bend = b.idx + b.n;
    for (std::size_t i = 0; i < a.n; ++i) {
        const std::int64_t ia = a.idx[i];
        if (ia >= hi) break;
        const std::int64_t* j0 = std::lower_bound(bbeg, bend, lo - ia);
        for (const std::int64_t* p = j0; p != bend; ++p) {
            const std::int64_t s = ia + *p;
            if (s >= hi) break;
            std::size_t j = static_cast<std::size_t>(p - bbeg);
            block_product(a.coef + i * w, b.coef + j * w, w, &out[static_cast<std::size_t>(s) * ow]);
        }
    }
}

}  // namespace

int available_threads() { return omp_get_max_threads(); }

void convolve_serial(const SparseOperand& a, const SparseOperand& b, std::int64_t L, std::vector<BigInt>& out) {
    const int w = a.width;
    const int ow = 2 * w - 1;
    for (std::size_t i = 0; i < a.n; ++i) {
        const std::int64_t ia = a.idx[i];
        if (ia >= L) break;
        for (std::size_t j = 0; j < b.n; ++j) {
            const std::int64_t s = ia + b.idx[j];
            if (s >= L) break;
            block_product(a.coef + i * w, b.coef + j * w, w, &out[static_cast<std::size_t>(s) * ow]);
        }
    }
}

void convolve_parallel(const SparseOperand& a, const SparseOperand& b, std::int64_t L, std::vector<BigInt>& out) {
    // Each chunk of output slots belongs to exactly one thread, so no
    // synchronization is needed and the result does not depend on the schedule.
    const std::int64_t nthreads = std::max(1, omp_get_max_threads());
    const std::int64_t nchunks = std::min<std::int64_t>(L, 8 * nthreads);
    if (nchunks <= 1) {
        convolve_serial(a, b, L, out);
        return;
    }
    // Work in slot s grows roughly linearly for dense inputs; balance chunks by
    // equal area under that ramp.
    std::vector<std::int64_t> bounds(nchunks + 1);
    for (std::int64_t c = 0; c <= nchunks; ++c) {
        double f = std::sqrt(static_cast<double>(c) / static_cast<double>(nchunks));
        bounds[c] = std::clamp<std::int64_t>(static_cast<std::int64_t>(f * static_cast<double>(L)), 0, L);
    }
    bounds[0] = 0;
    bounds[nchunks] = L;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < nchunks; ++c) {
        if (bounds[c] < bounds[c + 1]) convolve_range(a, b, bounds[c], bounds[c + 1], out);
    }
}

void convolve(const SparseOperand& a, const SparseOperand& b, std::int64_t L, std::vector<BigInt>& out, Exec exec) {
    if (exec == Exec::Auto) {
        const double work = static_cast<double>(a.n) * static_cast<double>(b.n) * a.width * a.width;
        exec = (work > 2e5 && omp_get_max_threads() > 1 && !omp_in_parallel()) ? Exec::Parallel : Exec::Serial;
    }
    if (exec == Exec::Parallel) convolve_parallel(a, b, L, out);
    else convolve_serial(a, b, L, out);
}

}  // namespace qmod::kernels
