#include "floation/lattice.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace flo {

namespace {

using BigMat = std::vector<std::vector<mpz_class>>;

BigMat to_big(const IntMat& m) {
    BigMat out;
    out.reserve(m.size());
    for (const auto& row : m) {
        std::vector<mpz_class> r;
        r.reserve(row.size());
        for (auto v : row) r.emplace_back(static_cast<long>(v));
        out.push_back(std::move(r));
    }
    return out;
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

std::int64_t to_i64(const mpz_class& v) {
    if (!v.fits_slong_p()) throw std::overflow_error("lattice entry exceeds 64 bits");
    return v.get_si();
}

}  // namespace

LatticeReducer::LatticeReducer(std::size_t dim, const IntMat& generators) : dim_(dim) {
    BigMat a = to_big(generators);
    for (auto& r : a) {
        if (r.size() != dim) throw std::invalid_argument("lattice generator has wrong dimension");
    }
    std::size_t row = 0;
    std::vector<std::size_t> piv;
    for (std::size_t col = 0; col < dim && row < a.size(); ++col) {
        // Euclid on column `col` among rows >= row.
        while (true) {
            std::size_t best = a.size();
            for (std::size_t r = row; r < a.size(); ++r) {
                if (a[r][col] != 0 && (best == a.size() || abs(a[r][col]) < abs(a[best][col]))) best = r;
            }
            if (best == a.size()) break;
            std::swap(a[row], a[best]);
            bool done = true;
            for (std::size_t r = row + 1; r < a.size(); ++r) {
                if (a[r][col] == 0) continue;
                mpz_class q = floor_div(a[r][col], a[row][col]);
                for (std::size_t c = col; c < dim; ++c) a[r][c] -= q * a[row][c];
                if (a[r][col] != 0) done = false;
            }
            if (done) break;
        }
        if (a[row][col] == 0) continue;
        if (a[row][col] < 0) {
            for (auto& v : a[row]) v = -v;
        }
        // reduce entries above the pivot
        for (std::size_t r = 0; r < row; ++r) {
            mpz_class q = floor_div(a[r][col], a[row][col]);
            if (q != 0) {
                for (std::size_t c = 0; c < dim; ++c) a[r][c] -= q * a[row][c];
            }
        }
        piv.push_back(col);
        ++row;
    }
    a.resize(row);
    rows_.reserve(row);
    for (auto& r : a) {
        IntVec out;
        out.reserve(dim);
        for (auto& v : r) out.push_back(to_i64(v));
        rows_.push_back(std::move(out));
    }
    pivots_ = std::move(piv);
}

void LatticeReducer::reduce(IntVec& v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const auto p = pivots_[k];
        const auto d = rows_[k][p];
        std::int64_t q = v[p] / d;
        if (v[p] % d != 0 && v[p] < 0) --q;
        if (q == 0) continue;
        for (std::size_t c = p; c < dim_; ++c) v[c] -= q * rows_[k][c];
    }
}

bool LatticeReducer::contains(const IntVec& v) const {
    IntVec w = v;
    reduce(w);
    return std::all_of(w.begin(), w.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<std::int64_t> smith_invariants(const IntMat& m) {
    BigMat a = to_big(m);
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<mpz_class> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // find smallest nonzero entry in the trailing block
        std::size_t pr = rows, pc = cols;
        for (std::size_t r = t; r < rows; ++r)
            for (std::size_t c = t; c < cols; ++c)
                if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < abs(a[pr][pc]))) {
                    pr = r;
                    pc = c;
                }
        if (pr == rows) break;
        std::swap(a[t], a[pr]);
        for (auto& r : a) std::swap(r[t], r[pc]);
        bool clean = true;
        for (std::size_t r = t + 1; r < rows; ++r) {
            mpz_class q = floor_div(a[r][t], a[t][t]);
            for (std::size_t c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
            if (a[r][t] != 0) clean = false;
        }
        for (std::size_t c = t + 1; c < cols; ++c) {
            mpz_class q = floor_div(a[t][c], a[t][t]);
            for (std::size_t r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
            if (a[t][c] != 0) clean = false;
        }
        if (!clean) continue;
        // divisibility condition on the trailing block
        bool divides = true;
        for (std::size_t r = t + 1; r < rows && divides; ++r)
            for (std::size_t c = t + 1; c < cols; ++c)
                if (a[r][c] % a[t][t] != 0) {
                    for (std::size_t cc = t; cc < cols; ++cc) a[t][cc] += a[r][cc];
                    divides = false;
                    break;
                }
        if (!divides) continue;
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    std::vector<std::int64_t> out;
    for (auto& d : diag) out.push_back(to_i64(d));
    return out;
}

AbelianGroupShape cokernel_shape(std::size_t cols, const IntMat& relations) {
    AbelianGroupShape s;
    auto inv = relations.empty() ? std::vector<std::int64_t>{} : smith_invariants(relations);
    s.free_rank = cols - inv.size();
    for (auto d : inv)
        if (d > 1) s.torsion.push_back(d);
    return s;
}

}  // namespace flo
