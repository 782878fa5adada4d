#include "floation/orders.hpp"

#include <numeric>

#include "floation/error.hpp"

namespace flo {

const char* to_string(Comparison c) {
    switch (c) {
        case Comparison::Less: return "Less";
        case Comparison::Greater: return "Greater";
        case Comparison::Equivalent: return "Equivalent";
    }
    return "?";
}

namespace {

Comparison from_sign(int s) {
    return s < 0 ? Comparison::Less : (s > 0 ? Comparison::Greater : Comparison::Equivalent);
}

using RatMat = std::vector<RatVec>;

// Rows: one per (functional, power-basis coordinate); columns: lattice coordinates.
RatMat coefficient_rows(const FunctionalChain& c, std::size_t count) {
    RatMat rows;
    const std::size_t deg = c.field->degree();
    for (std::size_t f = 0; f < count && f < c.functionals.size(); ++f)
        for (std::size_t k = 0; k < deg; ++k) {
            RatVec row(c.n);
            for (std::size_t i = 0; i < c.n; ++i) row[i] = c.functionals[f][i].coords()[k];
            rows.push_back(std::move(row));
        }
    return rows;
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMat& m, std::size_t cols) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < m.size(); ++col) {
        std::size_t p = r;
        while (p < m.size() && m[p][col] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        Rational inv = 1 / m[r][col];
        for (auto& v : m[r]) v *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][col] == 0) continue;
            Rational f = m[i][col];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        piv.push_back(col);
        ++r;
    }
    return piv;
}

}  // namespace

FunctionalChain::FunctionalChain(FieldPtr f, std::size_t rank, std::vector<Functional> fs)
    : field(std::move(f)), n(rank), functionals(std::move(fs)) {
    if (functionals.empty()) throw Error(ErrorCode::Invalid, "BadChain", "functional chain is empty");
    for (const auto& fn : functionals) {
        if (fn.size() != n) throw Error(ErrorCode::Order, "RankMismatch", "functional length differs from lattice rank");
        bool nonzero = false;
        for (const auto& a : fn) {
            if (a.field() != field) throw Error(ErrorCode::Order, "FieldMismatch", "functional coefficient field");
            nonzero = nonzero || !a.is_zero();
        }
        if (!nonzero) throw Error(ErrorCode::Invalid, "BadChain", "zero functional in chain");
    }
}

int FunctionalChain::sign(const IntVec& v) const {
    for (const auto& f : functionals) {
        int s = dot(f, v).sign();
        if (s != 0) return s;
    }
    return 0;
}

std::size_t kernel_dimension(const FunctionalChain& c, std::size_t count) {
    RatMat rows = coefficient_rows(c, count);
    return c.n - rref(rows, c.n).size();
}

bool is_total(const FunctionalChain& c) { return kernel_dimension(c, c.functionals.size()) == 0; }

bool is_archimedean(const FunctionalChain& c) {
    if (!is_total(c))
        throw Error(ErrorCode::Order, "NotTotal",
                    "chain has a nontrivial common kernel of dimension " +
                        std::to_string(kernel_dimension(c, c.functionals.size())) + " (partial order)");
    return kernel_dimension(c, 1) == 0;
}

std::optional<IntVec> kernel_generator(const FunctionalChain& c) {
    if (c.n != 2) throw Error(ErrorCode::Order, "RankMismatch", "kernel_generator expects a rank-2 chain");
    RatMat rows = coefficient_rows(c, 1);
    auto piv = rref(rows, c.n);
    if (piv.size() == c.n) return std::nullopt;
    // one free column
    std::size_t free_col = (piv.empty() || piv[0] != 0) ? 0 : 1;
    RatVec v(c.n, Rational(0));
    v[free_col] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -rows[r][free_col];
    mpz_class den = 1;
    for (auto& q : v) den = lcm(den, q.get_den());
    IntVec out;
    mpz_class g = 0;
    std::vector<mpz_class> ints;
    for (auto& q : v) {
        mpz_class z = q.get_num() * (den / q.get_den());
        ints.push_back(z);
        g = gcd(g, z);
    }
    for (auto& z : ints) out.push_back(mpz_class(z / g).get_si());
    for (auto x : out) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : out) y = -y;
        break;
    }
    return out;
}

int compare_levels(const Level& a, const Level& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k) {
        int s = compare(a[k], b[k]);
        if (s != 0) return s;
    }
    return 0;
}

OrderOracle::OrderOracle(ZnOrder o) : backend_(std::move(o)) {
    rank_ = std::get<ZnOrder>(backend_).chain.n;
    quotient_ = NilQuotient(rank_, {});
}

OrderOracle::OrderOracle(SurfaceLexOrder o) : backend_(std::move(o)) {
    auto& s = std::get<SurfaceLexOrder>(backend_);
    rank_ = s.h1.size();
    if (rank_ == 0) throw Error(ErrorCode::Invalid, "BadOrder", "empty H1 functional");
    if (s.quotient.rank() == 0) s.quotient = NilQuotient(rank_, {});
    if (s.quotient.rank() != rank_)
        throw Error(ErrorCode::Order, "RankMismatch", "quotient rank differs from H1 functional length");
    auto field = s.h1[0].field();
    for (const auto& a : s.h1)
        if (a.field() != field) throw Error(ErrorCode::Order, "FieldMismatch", "H1 functional coefficients");
    if (s.depth2) {
        if (s.depth2->size() != pair_count(rank_))
            throw Error(ErrorCode::Order, "RankMismatch", "depth-2 functional must have one entry per generator pair");
        for (const auto& a : *s.depth2)
            if (a.field() != field) throw Error(ErrorCode::Order, "FieldMismatch", "depth-2 functional coefficients");
        for (const auto& row : s.quotient.relator_lattice().basis())
            if (!dot(*s.depth2, row).is_zero())
                throw Error(ErrorCode::Order, "BadOrder", "depth-2 functional does not vanish on the relator lattice");
    }
    quotient_ = s.quotient;
}

OrderOracle::OrderOracle(UserTable o) : backend_(std::move(o)) {
    const auto& t = std::get<UserTable>(backend_);
    rank_ = t.rank;
    for (std::size_t i = 0; i < t.classes.size(); ++i)
        for (const auto& w : t.classes[i]) {
            if (!table_rank_.emplace(w, i).second)
                throw Error(ErrorCode::Invalid, "InconsistentTable", "word listed in two classes");
        }
}

std::string OrderOracle::backend_name() const {
    switch (backend_.index()) {
        case 0: return "zn";
        case 1: return "surface_lex";
        default: return "user_table";
    }
}

void OrderOracle::check_rank(const Word& w) const {
    for (const auto& l : w.letters())
        if (l.gen >= rank_)
            throw Error(ErrorCode::Order, "RankMismatch",
                        "word uses generator " + std::to_string(l.gen) + " but oracle rank is " + std::to_string(rank_));
}

FieldPtr OrderOracle::field() const {
    if (auto* z = std::get_if<ZnOrder>(&backend_)) return z->chain.field;
    if (auto* s = std::get_if<SurfaceLexOrder>(&backend_)) return s->h1[0].field();
    throw Error(ErrorCode::Order, "NoField", "user tables carry no number field");
}

NilElement OrderOracle::element(const Word& w) const {
    if (!is_group_backend()) throw Error(ErrorCode::Order, "NotAGroupOrder", "user tables have no group elements");
    check_rank(w);
    return quotient_.image(w);
}

Level OrderOracle::level(const NilElement& a) const {
    if (auto* z = std::get_if<ZnOrder>(&backend_)) {
        Level out;
        for (const auto& f : z->chain.functionals) out.push_back(dot(f, a.x));
        return out;
    }
    if (auto* s = std::get_if<SurfaceLexOrder>(&backend_)) {
        Level out{dot(s->h1, a.x)};
        if (s->depth2) out.push_back(dot(*s->depth2, a.c));
        return out;
    }
    throw Error(ErrorCode::Order, "NotAGroupOrder", "user tables have no levels");
}

Comparison OrderOracle::compare_elements(const NilElement& a, const NilElement& b) const {
    if (auto* z = std::get_if<ZnOrder>(&backend_)) {
        IntVec d(a.x.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.x[i] - b.x[i];
        return from_sign(z->chain.sign(d));
    }
    if (auto* s = std::get_if<SurfaceLexOrder>(&backend_)) {
        // v^-1 u; its degree-2 part is central, so this equals u v^-1's class when H1 ties
        NilElement d = quotient_.multiply(quotient_.inverse(b), a);
        int sg = dot(s->h1, d.x).sign();
        if (sg == 0 && s->depth2) sg = dot(*s->depth2, d.c).sign();
        return from_sign(sg);
    }
    throw Error(ErrorCode::Order, "NotAGroupOrder", "user tables have no group elements");
}

Comparison OrderOracle::compare(const Word& u, const Word& v) const {
    if (const auto* t = std::get_if<UserTable>(&backend_)) {
        (void)t;
        check_rank(u);
        check_rank(v);
        auto iu = table_rank_.find(u), iv = table_rank_.find(v);
        if (iu == table_rank_.end() || iv == table_rank_.end())
            throw Error(ErrorCode::Order, "NotInTable", "word missing from the explicit order table");
        return from_sign(iu->second < iv->second ? -1 : (iu->second > iv->second ? 1 : 0));
    }
    return compare_elements(element(u), element(v));
}

std::string OrderOracle::key(const Word& w) const {
    check_rank(w);
    if (!is_group_backend()) {
        std::string out;
        for (const auto& l : w.letters()) out += std::to_string(l.gen) + (l.sign > 0 ? "+" : "-") + ",";
        return out;
    }
    return element_key(quotient_.image(w));
}

std::string OrderOracle::element_key(const NilElement& e) const {
    std::string out;
    for (auto v : e.x) out += std::to_string(v) + ",";
    if (std::holds_alternative<SurfaceLexOrder>(backend_)) {
        out += "|";
        for (auto v : e.c) out += std::to_string(v) + ",";
    }
    return out;
}

std::vector<int> check_edges_positive_or_flip(const OrderOracle& o, const std::vector<Word>& edge_words,
                                              const std::vector<std::string>& edge_names) {
    std::vector<int> signs;
    signs.reserve(edge_words.size());
    const Word unit;
    for (std::size_t i = 0; i < edge_words.size(); ++i) {
        Comparison c = o.compare(edge_words[i], unit);
        if (c == Comparison::Equivalent) {
            std::string id = i < edge_names.size() ? edge_names[i] : std::to_string(i);
            throw Error(ErrorCode::Order, "EdgeEquivalentToUnit", "edge " + id + " is equivalent to the unit");
        }
        signs.push_back(c == Comparison::Greater ? 1 : -1);
    }
    return signs;
}

}  // namespace flo
