#include "floation/embed.hpp"

#include <algorithm>
#include <deque>

#include "floation/error.hpp"

namespace flo {

Keyer free_group_keyer() {
    return [](const Word& w) {
        std::string out;
        for (const auto& l : w.letters()) out += std::to_string(l.gen) + (l.sign > 0 ? "+" : "-") + ",";
        return out;
    };
}

Keyer oracle_keyer(const OrderOracle& o) {
    auto copy = std::make_shared<const OrderOracle>(o);
    return [copy](const Word& w) { return copy->key(w); };
}

bool is_dyadic(const Rational& r) {
    mpz_class d = r.get_den();
    return mpz_popcount(d.get_mpz_t()) == 1;
}

void EmbeddingTable::add(const Word& w, std::string key, Rational value) {
    by_key_.emplace(key, entries_.size());
    entries_.push_back(Entry{w, std::move(key), std::move(value)});
}

EmbeddingTable EmbeddingTable::from_values(const std::vector<std::pair<Word, Rational>>& values, Keyer keyer) {
    EmbeddingTable t(std::move(keyer));
    for (const auto& [w, v] : values) {
        if (!is_dyadic(v)) throw Error(ErrorCode::Invalid, "NotDyadic", "table value " + v.get_str() + " is not dyadic");
        auto key = t.keyer_(w);
        if (t.by_key_.count(key)) throw Error(ErrorCode::Invalid, "DuplicateEntry", "word listed twice");
        t.add(w, key, v);
    }
    std::vector<std::size_t> idx(t.entries_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return t.entries_[a].value < t.entries_[b].value; });
    for (std::size_t i : idx)
        if (t.sorted_.empty() || t.entries_[t.sorted_.back()].value != t.entries_[i].value) t.sorted_.push_back(i);
    return t;
}

std::optional<Rational> EmbeddingTable::value(const Word& w) const { return value_by_key(keyer_(w)); }

std::optional<Rational> EmbeddingTable::value_by_key(const std::string& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return entries_[it->second].value;
}

nlohmann::json EmbeddingTable::to_json(const GeneratorSet& gens) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries_) {
        mpz_class den = e.value.get_den();
        auto exponent = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
        arr.push_back({{"word", format_word(e.word, gens)},
                       {"numerator", mpz_class(e.value.get_num()).get_str()},
                       {"exponent", exponent}});
    }
    return nlohmann::json{{"entries", arr}};
}

EmbeddingTable minimal_embed(const OrderOracle& o, const std::vector<Word>& seq) {
    if (seq.empty() || !seq.front().empty())
        throw Error(ErrorCode::Invalid, "BadEnumeration", "enumeration must start with the identity word");
    EmbeddingTable t(oracle_keyer(o));
    for (const auto& w : seq) {
        auto key = t.keyer_(w);
        if (t.by_key_.count(key)) continue;
        auto& reps = t.sorted_;
        std::size_t lo = 0, hi = reps.size();
        std::optional<std::size_t> equivalent;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            Comparison c = o.compare(w, t.entries_[reps[mid]].word);
            if (c == Comparison::Equivalent) {
                equivalent = mid;
                break;
            }
            if (c == Comparison::Less)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (equivalent) {
            t.add(w, key, t.entries_[reps[*equivalent]].value);
            continue;
        }
        Rational v;
        if (reps.empty())
            v = 0;
        else if (lo == reps.size())
            v = t.entries_[reps.back()].value + 1;
        else if (lo == 0)
            v = t.entries_[reps.front()].value - 1;
        else
            v = (t.entries_[reps[lo - 1]].value + t.entries_[reps[lo]].value) / 2;
        t.add(w, key, v);
        reps.insert(reps.begin() + static_cast<std::ptrdiff_t>(lo), t.entries_.size() - 1);
    }
    return t;
}

std::vector<Word> breadth_first_ball(const std::vector<Word>& generators, int radius, const Keyer& keyer) {
    std::vector<Word> letters;
    for (const auto& g : generators) {
        letters.push_back(g);
        letters.push_back(g.inverse());
    }
    std::vector<Word> out{Word{}};
    std::unordered_map<std::string, bool> seen{{keyer(Word{}), true}};
    std::vector<Word> frontier{Word{}};
    for (int r = 0; r < radius; ++r) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (const auto& l : letters) {
                Word x = w * l;
                if (seen.emplace(keyer(x), true).second) {
                    next.push_back(x);
                    out.push_back(x);
                }
            }
        frontier = std::move(next);
    }
    return out;
}

PLMap::PLMap(std::vector<Rational> xs, std::vector<Rational> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) throw Error(ErrorCode::Invalid, "BadPLMap", "breakpoint/image length mismatch");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i - 1] < xs_[i]) || !(ys_[i - 1] < ys_[i]))
            throw Error(ErrorCode::Invalid, "BadPLMap", "breakpoints and images must be strictly increasing");
}

namespace {

Rational interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys, const Rational& x) {
    if (xs.empty()) return x;
    if (x <= xs.front()) return ys.front() + (x - xs.front());
    if (x >= xs.back()) return ys.back() + (x - xs.back());
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs.begin());
    const auto &x0 = xs[k - 1], &x1 = xs[k], &y0 = ys[k - 1], &y1 = ys[k];
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

Rational PLMap::operator()(const Rational& x) const { return interpolate(xs_, ys_, x); }

PLMap PLMap::compose(const PLMap& inner) const {
    std::vector<Rational> xs = inner.xs_;
    PLMap inv = inner.inverse();
    for (const auto& x : xs_) xs.push_back(inv(x));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<Rational> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back((*this)(inner(x)));
    return PLMap(std::move(xs), std::move(ys));
}

ExtendedAction extend_action(const EmbeddingTable& t, const Word& g, bool strict) {
    ExtendedAction out;
    std::vector<Rational> xs, ys;
    for (std::size_t rep : t.classes()) {
        const auto& e = t.entries()[rep];
        auto image = t.value(g * e.word);
        if (!image) {
            out.unsupported.push_back(e.word);
            continue;
        }
        xs.push_back(e.value);
        ys.push_back(*image);
    }
    if (strict && !out.unsupported.empty())
        throw Error(ErrorCode::Order, "InsufficientSupport",
                    std::to_string(out.unsupported.size()) + " table entries have products outside the table");
    out.map = PLMap(std::move(xs), std::move(ys));
    return out;
}

CollapseMap::CollapseMap(std::vector<Rational> xs, std::vector<Rational> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i - 1] < xs_[i]) || ys_[i] < ys_[i - 1])
            throw Error(ErrorCode::Invalid, "OrderMismatch", "collapse map must be monotone");
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (ys_[i] != ys_[i - 1]) continue;
        if (!intervals_.empty() && intervals_.back().second == xs_[i - 1])
            intervals_.back().second = xs_[i];
        else
            intervals_.emplace_back(xs_[i - 1], xs_[i]);
    }
}

Rational CollapseMap::operator()(const Rational& x) const { return interpolate(xs_, ys_, x); }

CollapseMap collapse_between(const EmbeddingTable& j, const EmbeddingTable& i0) {
    std::vector<std::pair<Rational, Rational>> pts;
    for (const auto& e : j.entries()) {
        auto target = i0.value_by_key(e.key);
        if (!target) target = i0.value(e.word);
        if (!target) throw Error(ErrorCode::Invalid, "OrderMismatch", "word embedded by j but not by i0");
        pts.emplace_back(e.value, *target);
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.first < b.first || (a.first == b.first && a.second < b.second);
    });
    std::vector<Rational> xs, ys;
    for (const auto& [x, y] : pts) {
        if (!xs.empty() && xs.back() == x) {
            if (ys.back() != y)
                throw Error(ErrorCode::Invalid, "OrderMismatch", "j identifies words that i0 separates");
            continue;
        }
        if (!ys.empty() && y < ys.back())
            throw Error(ErrorCode::Invalid, "OrderMismatch", "j and i0 order the words differently");
        xs.push_back(x);
        ys.push_back(y);
    }
    return CollapseMap(std::move(xs), std::move(ys));
}

}  // namespace flo
