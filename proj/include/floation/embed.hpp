#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "floation/algebraic.hpp"
#include "floation/orders.hpp"

namespace flo {

/// Identity of the group element behind a word (see OrderOracle::key).
using Keyer = std::function<std::string(const Word&)>;
Keyer free_group_keyer();
Keyer oracle_keyer(const OrderOracle& o);

bool is_dyadic(const Rational& r);

/// Order-preserving assignment of dyadic rationals to words. Equivalent words share
/// a value; `classes()` lists one representative per value, sorted by value.
class EmbeddingTable {
public:
    struct Entry {
        Word word;
        std::string key;
        Rational value;
    };

    EmbeddingTable() = default;
    explicit EmbeddingTable(Keyer keyer) : keyer_(std::move(keyer)) {}

    /// Direct construction from (word, value) pairs; values must be dyadic and
    /// words with equal values are treated as one class.
    static EmbeddingTable from_values(const std::vector<std::pair<Word, Rational>>& values,
                                      Keyer keyer = free_group_keyer());

    const std::vector<Entry>& entries() const { return entries_; }
    const std::vector<std::size_t>& classes() const { return sorted_; }
    const Keyer& keyer() const { return keyer_; }
    std::size_t size() const { return entries_.size(); }

    std::optional<Rational> value(const Word& w) const;
    std::optional<Rational> value_by_key(const std::string& key) const;

    nlohmann::json to_json(const GeneratorSet& gens) const;

private:
    friend EmbeddingTable minimal_embed(const OrderOracle&, const std::vector<Word>&);
    friend class EmbeddingBuilder;
    void add(const Word& w, std::string key, Rational value);

    Keyer keyer_ = free_group_keyer();
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> by_key_;
    std::vector<std::size_t> sorted_;  // entry index of each class representative, by value
};

/// Minimal embedding: s0 -> 0, a new maximum -> max + 1, a new minimum -> min - 1,
/// otherwise the midpoint of the nearest embedded neighbours.
EmbeddingTable minimal_embed(const OrderOracle& o, const std::vector<Word>& seq);

/// Breadth-first enumeration of the ball of radius `radius` in the letters
/// generators[k]^{+1}, generators[k]^{-1} (k ascending, + before -), one word per key.
std::vector<Word> breadth_first_ball(const std::vector<Word>& generators, int radius, const Keyer& keyer);

/// Increasing piecewise-linear homeomorphism of R; slope 1 outside the breakpoints.
class PLMap {
public:
    PLMap() = default;  // identity
    PLMap(std::vector<Rational> xs, std::vector<Rational> ys);

    const std::vector<Rational>& breakpoints() const { return xs_; }
    const std::vector<Rational>& images() const { return ys_; }

    Rational operator()(const Rational& x) const;
    PLMap inverse() const { return PLMap(ys_, xs_); }
    /// (*this) o inner
    PLMap compose(const PLMap& inner) const;

private:
    std::vector<Rational> xs_, ys_;
};

struct ExtendedAction {
    PLMap map;
    std::vector<Word> unsupported;  // table words h with g*h outside the table
};

/// Piecewise-linear extension of i(h) -> i(g h) over the table. With strict=true a
/// nonempty unsupported list raises Error(Order, "InsufficientSupport").
ExtendedAction extend_action(const EmbeddingTable& t, const Word& g, bool strict = false);

/// Monotone continuous surjection f with f(j(g)) = i0(g); collapses the gaps of j
/// whose endpoints i0 identifies.
class CollapseMap {
public:
    CollapseMap() = default;
    CollapseMap(std::vector<Rational> xs, std::vector<Rational> ys);

    Rational operator()(const Rational& x) const;
    const std::vector<std::pair<Rational, Rational>>& collapsed_intervals() const { return intervals_; }
    const std::vector<Rational>& breakpoints() const { return xs_; }

private:
    std::vector<Rational> xs_, ys_;
    std::vector<std::pair<Rational, Rational>> intervals_;
};

CollapseMap collapse_between(const EmbeddingTable& j, const EmbeddingTable& i0);

}  // namespace flo
