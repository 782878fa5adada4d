// Independent brute-force re-implementations used as test oracles.
#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "floation/embed.hpp"
#include "floation/orders.hpp"
#include "floation/words.hpp"

namespace oracle {

using flo::Rational;
using flo::Word;

// Truncated Magnus expansion in noncommuting X_0..X_{n-1}, monomials of degree <= 2.
using Series = std::map<std::vector<std::size_t>, long>;

inline Series magnus_letter(std::size_t gen, int sign) {
    // a -> 1 + X, a^-1 -> 1 - X + X^2 - ...
    Series s{{{}, 1}, {{gen}, sign}};
    if (sign < 0) s[{gen, gen}] = 1;
    return s;
}

inline Series multiply(const Series& a, const Series& b) {
    Series out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            if (ma.size() + mb.size() > 2) continue;
            auto m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            out[m] += ca * cb;
        }
    return out;
}

inline Series magnus(const Word& w) {
    Series s{{{}, 1}};
    for (const auto& l : w.letters()) s = multiply(s, magnus_letter(l.gen, l.sign));
    return s;
}

inline long coefficient(const Series& s, std::vector<std::size_t> m) {
    auto it = s.find(m);
    return it == s.end() ? 0 : it->second;
}

inline Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len), gen(0, rank - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<flo::Letter> letters(len(rng));
    for (auto& l : letters) l = {gen(rng), coin(rng) ? 1 : -1};
    return flo::reduce_word(letters, rank);
}

// A random finite order on distinct words: `classes` listed low to high.
struct RandomTable {
    flo::UserTable table;
    std::vector<Word> sequence;  // identity first, then a shuffle of the rest
    std::map<Word, std::size_t> class_of;
};

inline RandomTable random_table(std::mt19937_64& rng, std::size_t words, bool ties) {
    RandomTable r;
    r.table.rank = 2;
    std::vector<Word> pool{Word{}};
    while (pool.size() < words) {
        Word w = random_word(rng, 2, 5);
        if (std::find(pool.begin(), pool.end(), w) == pool.end()) pool.push_back(w);
    }
    std::vector<Word> order = pool;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> coin(0, 2);
    for (const auto& w : order) {
        if (ties && !r.table.classes.empty() && coin(rng) == 0)
            r.table.classes.back().push_back(w);
        else
            r.table.classes.push_back({w});
        r.class_of[w] = r.table.classes.size() - 1;
    }
    r.sequence = pool;
    std::shuffle(r.sequence.begin() + 1, r.sequence.end(), rng);
    return r;
}

// Splits every class of `t` into singletons in a random order: a blow-up of t.
inline flo::UserTable refine(const flo::UserTable& t, std::mt19937_64& rng) {
    flo::UserTable out;
    out.rank = t.rank;
    for (auto cls : t.classes) {
        std::shuffle(cls.begin(), cls.end(), rng);
        for (const auto& w : cls) out.classes.push_back({w});
    }
    return out;
}

// The three embedding rules applied directly, by linear scans over all placed words.
inline std::map<Word, Rational> embed_by_rules(const std::vector<Word>& seq, const std::map<Word, std::size_t>& cls) {
    std::map<Word, Rational> value;
    for (const auto& w : seq) {
        if (value.count(w)) continue;
        const std::size_t c = cls.at(w);
        std::optional<Rational> below, above, same;
        for (const auto& [u, v] : value) {
            const std::size_t cu = cls.at(u);
            if (cu == c) same = v;
            if (cu < c && (!below || v > *below)) below = v;
            if (cu > c && (!above || v < *above)) above = v;
        }
        Rational v;
        if (same)
            v = *same;
        else if (!below && !above)
            v = 0;
        else if (!above)
            v = *below + 1;
        else if (!below)
            v = *above - 1;
        else
            v = (*below + *above) / 2;
        v.canonicalize();
        value[w] = v;
    }
    return value;
}

}  // namespace oracle
