#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "floation/algebraic.hpp"
#include "floation/words.hpp"

namespace flo {

enum class Comparison { Less, Equivalent, Greater };

const char* to_string(Comparison c);

using Functional = std::vector<AlgebraicNumber>;

/// Lexicographically evaluated list of linear functionals on Z^n, all with
/// coefficients in one number field.
struct FunctionalChain {
    FieldPtr field;
    std::size_t n = 0;
    std::vector<Functional> functionals;

    FunctionalChain() = default;
    FunctionalChain(FieldPtr field, std::size_t n, std::vector<Functional> functionals);

    /// Sign of the first functional that does not vanish on v (0 if all vanish).
    int sign(const IntVec& v) const;
};

/// Dimension of the common integer kernel of the first `count` functionals.
std::size_t kernel_dimension(const FunctionalChain& c, std::size_t count);
bool is_total(const FunctionalChain& c);

/// True iff the leading functional alone is injective on Z^n.
/// Throws Error(Order, "NotTotal") for a partial chain.
bool is_archimedean(const FunctionalChain& c);

/// Primitive generator of the kernel of the leading functional (first nonzero
/// coordinate positive), or nullopt when that functional is injective. Rank 2 only.
std::optional<IntVec> kernel_generator(const FunctionalChain& c);

/// Left-invariant lexicographic order on G/G_2 of a group presented with commutator
/// relators: H_1 functional first, then (optionally) a functional on the degree-2
/// classes. Without the second functional it is the partial order pulled back from H_1.
struct SurfaceLexOrder {
    Functional h1;
    std::optional<Functional> depth2;
    NilQuotient quotient;
};

struct ZnOrder {
    FunctionalChain chain;
};

/// An explicit finite order: equivalence classes listed in increasing order.
struct UserTable {
    std::size_t rank = 0;
    std::vector<std::vector<Word>> classes;
};

/// Sort key of a group element, compared lexicographically; order-preserving for
/// the functional backends.
using Level = std::vector<AlgebraicNumber>;
int compare_levels(const Level& a, const Level& b);

class OrderOracle {
public:
    using Backend = std::variant<ZnOrder, SurfaceLexOrder, UserTable>;

    explicit OrderOracle(ZnOrder o);
    explicit OrderOracle(SurfaceLexOrder o);
    explicit OrderOracle(UserTable o);

    const Backend& backend() const { return backend_; }
    std::string backend_name() const;
    std::size_t rank() const { return rank_; }
    bool is_group_backend() const { return !std::holds_alternative<UserTable>(backend_); }

    Comparison compare(const Word& u, const Word& v) const;

    /// Canonical identity of the group element (or table word) behind a word;
    /// Equivalent words may still carry distinct keys.
    std::string key(const Word& w) const;
    std::string element_key(const NilElement& e) const;

    /// Functional backends: class-2 quotient element of a word / order-preserving
    /// level of an element.
    const NilQuotient& quotient() const { return quotient_; }
    NilElement element(const Word& w) const;
    Comparison compare_elements(const NilElement& a, const NilElement& b) const;
    Level level(const NilElement& a) const;
    FieldPtr field() const;

private:
    void check_rank(const Word& w) const;
    Backend backend_;
    std::size_t rank_ = 0;
    NilQuotient quotient_;
    std::map<Word, std::size_t> table_rank_;
};

/// Sign of each edge word relative to the identity; Error(Order, "EdgeEquivalentToUnit")
/// names the first edge that is Equivalent to the unit.
std::vector<int> check_edges_positive_or_flip(const OrderOracle& o, const std::vector<Word>& edge_words,
                                              const std::vector<std::string>& edge_names = {});

}  // namespace flo
