#include "floation/order_io.hpp"

#include <fstream>

#include "floation/error.hpp"

namespace flo {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "ParseError", "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, "ParseError", path.string() + ": " + e.what());
    }
}

namespace {

Rational rational_from(const json& v) {
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_float()) return parse_rational(v.dump());
    throw Error(ErrorCode::Parse, "ParseError", "expected a rational, got " + v.dump());
}

const json& need(const json& doc, const char* field) {
    if (!doc.contains(field)) throw Error(ErrorCode::Parse, "ParseError", std::string("missing field '") + field + "'");
    return doc.at(field);
}

Functional parse_functional(const json& arr, const FieldPtr& field) {
    if (!arr.is_array()) throw Error(ErrorCode::Parse, "ParseError", "functional must be an array");
    Functional f;
    for (const auto& c : arr) f.push_back(parse_coefficient(c, field));
    return f;
}

}  // namespace

FieldPtr parse_field(const json& spec, int precision_bits) {
    if (spec.is_null() || (spec.is_string() && spec.get<std::string>() == "Q")) {
        return precision_bits == 2048 ? NumberField::rationals()
                                      : std::make_shared<const NumberField>("Q", RatVec{0, 1}, -1, 1, precision_bits);
    }
    if (spec.is_string()) {
        const auto name = spec.get<std::string>();
        if (name == "sqrt2")
            return precision_bits == 2048 ? NumberField::sqrt2()
                                          : std::make_shared<const NumberField>("sqrt2", RatVec{-2, 0, 1}, 1, 2,
                                                                                precision_bits);
        if (name == "lambda6")
            return precision_bits == 2048
                       ? NumberField::lambda6()
                       : std::make_shared<const NumberField>("lambda6", RatVec{-1, -1, 0, 0, 0, 0, 1}, 1, 2,
                                                             precision_bits);
        throw Error(ErrorCode::Parse, "ParseError", "unknown field '" + name + "'");
    }
    RatVec coeffs;
    for (const auto& c : need(spec, "polynomial")) coeffs.push_back(rational_from(c));
    const auto& iv = need(spec, "interval");
    return std::make_shared<const NumberField>(spec.value("name", std::string("custom")), coeffs, rational_from(iv.at(0)),
                                               rational_from(iv.at(1)), precision_bits);
}

AlgebraicNumber parse_coefficient(const json& v, const FieldPtr& field) {
    if (v.is_array()) {
        RatVec coords;
        for (const auto& c : v) coords.push_back(rational_from(c));
        return AlgebraicNumber(field, coords);
    }
    return AlgebraicNumber(field, rational_from(v));
}

OrderOracle parse_order(const json& doc, const OrderContext& ctx) {
    const auto backend = need(doc, "backend").get<std::string>();
    if (backend == "user_table") {
        GeneratorSet gens = doc.contains("generators")
                                ? GeneratorSet(doc.at("generators").get<std::vector<std::string>>())
                                : (ctx.generators ? *ctx.generators
                                                  : throw Error(ErrorCode::Parse, "ParseError",
                                                                "user_table needs generator names"));
        UserTable t;
        t.rank = gens.rank();
        for (const auto& cls : need(doc, "classes")) {
            std::vector<Word> words;
            for (const auto& w : cls) words.push_back(parse_word(w.get<std::string>(), gens));
            t.classes.push_back(std::move(words));
        }
        return OrderOracle(std::move(t));
    }
    FieldPtr field = parse_field(doc.contains("field") ? doc.at("field") : json(), ctx.precision_bits);
    if (backend == "zn") {
        std::vector<Functional> fs;
        for (const auto& f : need(doc, "functionals")) fs.push_back(parse_functional(f, field));
        std::size_t n = doc.contains("rank") ? doc.at("rank").get<std::size_t>() : fs.at(0).size();
        return OrderOracle(ZnOrder{FunctionalChain(field, n, std::move(fs))});
    }
    if (backend == "surface_lex") {
        SurfaceLexOrder s;
        s.h1 = parse_functional(need(doc, "h1"), field);
        if (doc.contains("depth2") && !doc.at("depth2").is_null()) s.depth2 = parse_functional(doc.at("depth2"), field);
        std::vector<Word> relators = ctx.relators;
        if (doc.contains("relators")) {
            relators.clear();
            std::optional<GeneratorSet> gens = ctx.generators;
            if (doc.contains("generators")) gens = GeneratorSet(doc.at("generators").get<std::vector<std::string>>());
            if (!gens) throw Error(ErrorCode::Parse, "ParseError", "relators need generator names");
            for (const auto& r : doc.at("relators")) relators.push_back(parse_word(r.get<std::string>(), *gens));
        }
        s.quotient = NilQuotient(s.h1.size(), relators);
        return OrderOracle(std::move(s));
    }
    throw Error(ErrorCode::Parse, "ParseError", "unknown order backend '" + backend + "'");
}

OrderOracle load_order_file(const std::filesystem::path& path, const OrderContext& ctx) {
    return parse_order(read_json_file(path), ctx);
}

json to_json(const AlgebraicNumber& a) {
    json coords = json::array();
    for (const auto& c : a.coords()) coords.push_back(c.get_str());
    return json{{"coords", coords}, {"approx", a.to_double()}};
}

json describe_order(const OrderOracle& o) {
    json out{{"backend", o.backend_name()}, {"rank", o.rank()}};
    if (auto* z = std::get_if<ZnOrder>(&o.backend())) {
        const auto& c = z->chain;
        out["field"] = c.field->name();
        json fs = json::array();
        for (const auto& f : c.functionals) {
            json row = json::array();
            for (const auto& a : f) row.push_back(to_json(a));
            fs.push_back(row);
        }
        out["functionals"] = fs;
        out["total"] = is_total(c);
        if (is_total(c)) out["archimedean"] = is_archimedean(c);
        if (c.n == 2) {
            auto k = kernel_generator(c);
            out["kernel_generator"] = k ? json(*k) : json(nullptr);
        }
    } else if (auto* s = std::get_if<SurfaceLexOrder>(&o.backend())) {
        out["field"] = s->h1[0].field()->name();
        json h1 = json::array();
        for (const auto& a : s->h1) h1.push_back(to_json(a));
        out["h1"] = h1;
        out["depth2"] = s->depth2.has_value();
        out["relator_lattice_rank"] = s->quotient.relator_lattice().rank();
        out["total_on_quotient"] = s->depth2.has_value();
    } else if (auto* t = std::get_if<UserTable>(&o.backend())) {
        out["classes"] = t->classes.size();
    }
    return out;
}

}  // namespace flo
