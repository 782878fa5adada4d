#include "floation/words.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "floation/error.hpp"

namespace flo {

GeneratorSet::GeneratorSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw Error(ErrorCode::Invalid, "GeneratorSet", "rank must be >= 1");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw Error(ErrorCode::Invalid, "GeneratorSet", "empty generator name");
        if (n.find_first_of(" \t^") != std::string::npos)
            throw Error(ErrorCode::Invalid, "GeneratorSet", "bad generator name '" + n + "'");
        if (!seen.insert(n).second)
            throw Error(ErrorCode::Invalid, "GeneratorSet", "duplicate generator '" + n + "'");
    }
}

std::optional<std::size_t> GeneratorSet::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

bool Word::is_reduced() const {
    for (std::size_t i = 1; i < letters_.size(); ++i) {
        if (letters_[i].gen == letters_[i - 1].gen && letters_[i].sign == -letters_[i - 1].sign)
            return false;
    }
    return true;
}

Word Word::inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->gen, -it->sign});
    return w;
}

Word Word::generator(std::size_t gen, int sign) {
    Word w;
    w.letters_.push_back({gen, sign >= 0 ? 1 : -1});
    return w;
}

Word reduce_word(const std::vector<Letter>& letters, std::size_t rank) {
    Word w;
    auto& out = w.letters_;
    out.reserve(letters.size());
    for (const auto& l : letters) {
        if (l.gen >= rank)
            throw Error(ErrorCode::Parse, "UnknownGenerator", "generator index " + std::to_string(l.gen));
        if (l.sign != 1 && l.sign != -1) throw Error(ErrorCode::Parse, "BadLetter", "sign must be +1 or -1");
        if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
            out.pop_back();
        else
            out.push_back(l);
    }
    return w;
}

Word operator*(const Word& u, const Word& v) {
    std::vector<Letter> all = u.letters();
    all.insert(all.end(), v.letters().begin(), v.letters().end());
    std::size_t rank = 0;
    for (const auto& l : all) rank = std::max(rank, l.gen + 1);
    return reduce_word(all, rank);
}

Word commutator(const Word& u, const Word& v) { return u * v * u.inverse() * v.inverse(); }

Word power(const Word& w, int k) {
    Word base = k >= 0 ? w : w.inverse();
    Word out;
    for (int i = 0; i < std::abs(k); ++i) out = out * base;
    return out;
}

Word parse_word(std::string_view text, const GeneratorSet& gens) {
    std::vector<Letter> letters;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "e" && !gens.find("e")) continue;
        std::string name = tok;
        int exponent = 1;
        if (auto caret = tok.find('^'); caret != std::string::npos) {
            name = tok.substr(0, caret);
            auto ex = tok.substr(caret + 1);
            auto [p, ec] = std::from_chars(ex.data(), ex.data() + ex.size(), exponent);
            if (ec != std::errc() || p != ex.data() + ex.size() || exponent == 0)
                throw Error(ErrorCode::Parse, "BadWord", "bad exponent in token '" + tok + "'");
        }
        auto g = gens.find(name);
        if (!g) throw Error(ErrorCode::Parse, "UnknownGenerator", "unknown generator '" + name + "'");
        for (int i = 0; i < std::abs(exponent); ++i) letters.push_back({*g, exponent > 0 ? 1 : -1});
    }
    return reduce_word(letters, gens.rank());
}

std::string format_word(const Word& w, const GeneratorSet& gens) {
    if (w.empty()) return "e";
    std::string out;
    for (const auto& l : w.letters()) {
        if (!out.empty()) out += ' ';
        out += gens.name(l.gen);
        if (l.sign < 0) out += "^-1";
    }
    return out;
}

AbelianVector abelianize(const Word& w, std::size_t rank) {
    AbelianVector v(rank, 0);
    for (const auto& l : w.letters()) v.at(l.gen) += l.sign;
    return v;
}

std::size_t pair_count(std::size_t rank) { return rank * (rank - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t rank) {
    // rows i = 0..rank-2, each holding the pairs (i, j>i)
    return i * rank - i * (i + 1) / 2 + (j - i - 1);
}

namespace {

// Right-multiply (x, c) by a single letter, using the degree-2 Magnus product rule.
void apply_letter(IntVec& x, IntVec& c, std::size_t rank, std::size_t gen, int sign) {
    for (std::size_t i = 0; i < gen; ++i) c[pair_index(i, gen, rank)] += x[i] * sign;
    x[gen] += sign;
}

}  // namespace

Degree2Class magnus_degree2(const Word& w, std::size_t rank, const std::optional<IntVec>& quotient_relation) {
    IntVec x(rank, 0), c(pair_count(rank), 0);
    for (const auto& l : w.letters()) {
        if (l.gen >= rank) throw Error(ErrorCode::Parse, "UnknownGenerator", "letter outside rank");
        apply_letter(x, c, rank, l.gen, l.sign);
    }
    if (std::any_of(x.begin(), x.end(), [](auto v) { return v != 0; }))
        throw Error(ErrorCode::Invalid, "NonzeroAbelianization",
                    "degree-2 class is only defined on the commutator subgroup");
    if (quotient_relation) {
        if (quotient_relation->size() != c.size())
            throw Error(ErrorCode::Invalid, "RankMismatch", "quotient relation has wrong length");
        LatticeReducer red(c.size(), {*quotient_relation});
        red.reduce(c);
    }
    return Degree2Class{std::move(c)};
}

std::size_t NilElementHash::operator()(const NilElement& e) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::int64_t v) { h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (auto v : e.x) mix(v);
    for (auto v : e.c) mix(v);
    return h;
}

NilQuotient::NilQuotient(std::size_t rank, const std::vector<Word>& relators) : rank_(rank) {
    IntMat gens;
    for (const auto& r : relators) {
        auto ab = abelianize(r, rank);
        if (std::any_of(ab.begin(), ab.end(), [](auto v) { return v != 0; }))
            throw Error(ErrorCode::Invalid, "TorsionPresentation",
                        "relator with nonzero abelianization; the class-2 quotient needs commutator relators");
        gens.push_back(magnus_degree2(r, rank).pairs);
    }
    lattice_ = LatticeReducer(pair_count(rank), gens);
}

NilElement NilQuotient::identity() const { return NilElement{IntVec(rank_, 0), IntVec(pair_count(rank_), 0)}; }

NilElement NilQuotient::letter(std::size_t gen, int sign) const {
    NilElement e = identity();
    apply_letter(e.x, e.c, rank_, gen, sign);
    return e;
}

NilElement NilQuotient::multiply(const NilElement& a, const NilElement& b) const {
    NilElement out{a.x, a.c};
    for (std::size_t i = 0; i < rank_; ++i) out.x[i] += b.x[i];
    for (std::size_t i = 0; i < rank_; ++i) {
        if (a.x[i] == 0) continue;
        for (std::size_t j = i + 1; j < rank_; ++j) out.c[pair_index(i, j, rank_)] += a.x[i] * b.x[j];
    }
    for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] += b.c[k];
    canonicalize(out);
    return out;
}

NilElement NilQuotient::inverse(const NilElement& a) const {
    NilElement out{IntVec(rank_), IntVec(a.c.size())};
    for (std::size_t i = 0; i < rank_; ++i) out.x[i] = -a.x[i];
    for (std::size_t i = 0; i < rank_; ++i)
        for (std::size_t j = i + 1; j < rank_; ++j) {
            auto k = pair_index(i, j, rank_);
            out.c[k] = -a.c[k] + a.x[i] * a.x[j];
        }
    canonicalize(out);
    return out;
}

NilElement NilQuotient::image(const Word& w) const {
    NilElement e = identity();
    for (const auto& l : w.letters()) {
        if (l.gen >= rank_) throw Error(ErrorCode::Order, "RankMismatch", "word letter outside quotient rank");
        apply_letter(e.x, e.c, rank_, l.gen, l.sign);
    }
    canonicalize(e);
    return e;
}

bool NilQuotient::is_identity(const NilElement& a) const { return a == identity(); }

void NilQuotient::canonicalize(NilElement& a) const { lattice_.reduce(a.c); }

}  // namespace flo
