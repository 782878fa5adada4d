#pragma once

#include <cstdint>
#include <vector>

namespace flo {

using IntVec = std::vector<std::int64_t>;
using IntMat = std::vector<IntVec>;

/// Hermite normal form of the row lattice spanned by a set of integer vectors.
/// Used to pick canonical coset representatives of Z^m / L.
class LatticeReducer {
public:
    LatticeReducer() = default;
    LatticeReducer(std::size_t dim, const IntMat& generators);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    const IntMat& basis() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Canonical representative: 0 <= v[pivot] < pivot entry for every basis row.
    void reduce(IntVec& v) const;
    bool contains(const IntVec& v) const;

private:
    std::size_t dim_ = 0;
    IntMat rows_;
    std::vector<std::size_t> pivots_;
};

/// Diagonal of the Smith normal form (nonzero invariant factors, ascending divisibility).
std::vector<std::int64_t> smith_invariants(const IntMat& m);

struct AbelianGroupShape {
    std::size_t free_rank = 0;
    std::vector<std::int64_t> torsion;  // invariant factors > 1
};

/// Z^cols modulo the row span of `relations`.
AbelianGroupShape cokernel_shape(std::size_t cols, const IntMat& relations);

}  // namespace flo
