#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floation/lattice.hpp"

namespace flo {

class GeneratorSet {
public:
    GeneratorSet() = default;
    explicit GeneratorSet(std::vector<std::string> names);

    std::size_t rank() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    std::optional<std::size_t> find(std::string_view name) const;

    bool operator==(const GeneratorSet&) const = default;

private:
    std::vector<std::string> names_;
};

struct Letter {
    std::size_t gen = 0;
    int sign = 1;  // +1 or -1
    bool operator==(const Letter&) const = default;
};

/// A freely reduced word in the generators. Construct through reduce_word or the
/// product helpers; the invariant is checked by is_reduced().
class Word {
public:
    Word() = default;

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    bool is_reduced() const;

    Word inverse() const;
    static Word generator(std::size_t gen, int sign = 1);

    bool operator==(const Word&) const = default;
    auto operator<=>(const Word& o) const {
        return std::lexicographical_compare_three_way(
            letters_.begin(), letters_.end(), o.letters_.begin(), o.letters_.end(),
            [](const Letter& a, const Letter& b) {
                if (a.gen != b.gen) return a.gen <=> b.gen;
                return a.sign <=> b.sign;
            });
    }

private:
    friend Word reduce_word(const std::vector<Letter>&, std::size_t);
    std::vector<Letter> letters_;
};

/// Free reduction. Throws flo::Error(Parse) if a letter references a generator >= rank.
Word reduce_word(const std::vector<Letter>& letters, std::size_t rank);
Word operator*(const Word& u, const Word& v);
Word commutator(const Word& u, const Word& v);  // u v u^-1 v^-1
Word power(const Word& w, int k);

/// Tokens `a`, `a^-1`, `a^1`, `a^3`; `e` or empty text is the identity.
Word parse_word(std::string_view text, const GeneratorSet& gens);
std::string format_word(const Word& w, const GeneratorSet& gens);

using AbelianVector = IntVec;

AbelianVector abelianize(const Word& w, std::size_t rank);

/// Index of the ordered pair (i, j), i < j, among the rank*(rank-1)/2 pairs.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t rank);
std::size_t pair_count(std::size_t rank);

struct Degree2Class {
    IntVec pairs;
    bool operator==(const Degree2Class&) const = default;
};

/// Antisymmetrized degree-2 Magnus coefficients of a word with zero abelianization,
/// optionally reduced modulo the sublattice spanned by `quotient_relation`.
Degree2Class magnus_degree2(const Word& w, std::size_t rank,
                            const std::optional<IntVec>& quotient_relation = std::nullopt);

/// Element of the free class-2 nilpotent group truncated through degree 2 of the
/// Magnus expansion: abelian part x and the raw coefficients c_ij (i < j).
struct NilElement {
    IntVec x;
    IntVec c;
    bool operator==(const NilElement&) const = default;
};

struct NilElementHash {
    std::size_t operator()(const NilElement& e) const;
};

/// G / G_2 (lower central series, class 2) of a group presented on `rank`
/// generators whose relators all lie in the commutator subgroup. Elements are
/// kept in canonical form, so equality is the group's equality.
class NilQuotient {
public:
    NilQuotient() = default;
    NilQuotient(std::size_t rank, const std::vector<Word>& relators);

    std::size_t rank() const { return rank_; }
    const LatticeReducer& relator_lattice() const { return lattice_; }

    NilElement identity() const;
    NilElement letter(std::size_t gen, int sign) const;
    NilElement multiply(const NilElement& a, const NilElement& b) const;
    NilElement inverse(const NilElement& a) const;
    NilElement image(const Word& w) const;
    bool is_identity(const NilElement& a) const;

private:
    void canonicalize(NilElement& a) const;

    std::size_t rank_ = 0;
    LatticeReducer lattice_;
};

}  // namespace flo
