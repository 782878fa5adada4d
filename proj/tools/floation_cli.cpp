// floation command-line driver. Exit codes: 0 ok, 1 usage, 2 parse, 3 invalid
// input, 4 order, 5 trace, 6 theorem check.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "floation/embed.hpp"
#include "floation/error.hpp"
#include "floation/floation2.hpp"
#include "floation/floation3.hpp"
#include "floation/order_io.hpp"
#include "floation/straighten.hpp"
#include "floation/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flo;

namespace {

struct Globals {
    int precision_bits = 2048;
    std::uint64_t seed = 1;
    double eps = 1e-3;
    std::optional<int> radius;
    std::size_t max_crossings = 2000;
    std::size_t samples = 50;
};

fs::path resolve_complex(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    std::string name = fs::path(arg).stem().string();
    fs::path bundled = bundled_complex(name);
    if (fs::exists(bundled)) return bundled;
    throw Error(ErrorCode::Usage, "NoSuchFile", "no complex file '" + arg + "'");
}

fs::path resolve_order(const std::string& arg) {
    if (fs::exists(arg)) return arg;
    fs::path bundled = fs::path(FLOATION_DATA_DIR) / "orders" / (fs::path(arg).stem().string() + ".json");
    if (fs::exists(bundled)) return bundled;
    throw Error(ErrorCode::Usage, "NoSuchFile", "no order file '" + arg + "'");
}

template <class T>
OrderContext context_of(const T& t, int bits) {
    OrderContext ctx;
    ctx.generators = t.basis;
    ctx.relators = t.relators;
    ctx.precision_bits = bits;
    return ctx;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Usage, "CannotWrite", "cannot write '" + path + "'");
    out << text;
}

void emit_json(const json& j, const std::string& path) { emit(j.dump(2) + "\n", path); }

Lamination read_lamination(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Usage, "NoSuchFile", "no lamination file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, "ParseError", path + ": " + e.what());
    }
    const json& lj = doc.contains("lamination") ? doc.at("lamination") : doc;
    if (!lj.contains("leaves")) throw Error(ErrorCode::Parse, "ParseError", path + ": missing 'leaves'");
    Lamination l;
    for (const auto& g : lj.at("leaves"))
        l.leaves.push_back({g.at("a").get<double>(), g.at("b").get<double>(), g.value("sample", std::size_t{0})});
    return l;
}

RatVec parse_rationals(const std::string& text) {
    RatVec out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(parse_rational(tok));
    return out;
}

LeafStart parse_start(const std::string& text, const LiftedBall& ball) {
    const auto comma = text.find(',');
    std::size_t tri = 0;
    try {
        std::size_t used = 0;
        tri = std::stoul(text.substr(0, comma), &used);
        if (used != text.substr(0, comma).size()) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::Usage, "BadStart", "--start expects T or T,W");
    }
    if (tri >= ball.complex().triangle_count())
        throw Error(ErrorCode::Usage, "UnknownTriangle", "triangle id out of range");
    LiftedTriangle lift{tri, ball.quotient().identity()};
    if (comma == std::string::npos) return {lift, generic_level(ball, lift)};
    Rational w = parse_rational(text.substr(comma + 1));
    if (w <= 0 || w >= 1) throw Error(ErrorCode::Usage, "BadStart", "level weight must lie strictly between 0 and 1");
    auto c = ball.corners(lift);
    if (!c) throw Error(ErrorCode::Trace, "StartOutsideBall", "base triangle is not in the ball");
    std::array<std::size_t, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return compare_levels((*c)[x], (*c)[y]) < 0; });
    Level L = affine_level((*c)[idx[0]], (*c)[idx[2]], w);
    if (compare_levels(L, (*c)[idx[1]]) == 0)
        throw Error(ErrorCode::Trace, "LevelAtVertex", "start level passes through a vertex");
    return {lift, std::move(L)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floation: leaf tracing and straightening for left orders on surface and 3-manifold groups"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--precision-bits", g.precision_bits, "Isolating-interval refinement budget")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for level sampling")->capture_default_str();
    app.add_option("--eps", g.eps, "Boundary-angle tolerance")->capture_default_str();
    app.add_option("--radius", g.radius, "Ball radius for table valuations");
    app.add_option("--max-crossings", g.max_crossings, "Crossing cap per ray")->capture_default_str();
    app.add_option("--samples", g.samples, "Leaves sampled for straightening")->capture_default_str();

    std::function<void()> run;
    std::string complex_arg, order_arg, json_out, svg_out, csv_out;

    auto* validate = app.add_subcommand("validate", "Check a complex file and print its invariants");
    validate->add_option("complex", complex_arg, "Complex JSON or bundled name")->required();
    validate->add_option("--json", json_out, "Output path (default stdout)");
    validate->callback([&] {
        run = [&] {
            Triangulation t = load_and_validate(resolve_complex(complex_arg));
            emit_json(validation_report(t), json_out);
        };
    });

    auto* orders = app.add_subcommand("orders", "Order utilities");
    auto* describe = orders->add_subcommand("describe", "Describe an order and its edge positivity");
    describe->add_option("order", order_arg, "Order JSON or bundled name")->required();
    describe->add_option("--complex", complex_arg, "Complex supplying generator names and edges");
    describe->add_option("--json", json_out, "Output path");
    orders->require_subcommand(1);
    describe->callback([&] {
        run = [&] {
            OrderContext ctx;
            ctx.precision_bits = g.precision_bits;
            std::optional<Triangulation> t;
            if (!complex_arg.empty()) {
                t = load_and_validate(resolve_complex(complex_arg));
                std::visit([&](const auto& c) { ctx = context_of(c, g.precision_bits); }, *t);
            }
            OrderOracle o = load_order_file(resolve_order(order_arg), ctx);
            json j = describe_order(o);
            if (t) {
                json edges = json::array();
                for (const auto& r : check_essential(*t, &o)) {
                    const GeneratorSet& basis = std::visit([](const auto& c) -> const GeneratorSet& { return c.basis; }, *t);
                    json e{{"edge", r.edge}, {"word", format_word(r.word, basis)}, {"essential", to_string(r.status)},
                           {"reason", r.reason}};
                    if (o.rank() == basis.rank()) e["sign"] = to_string(o.compare(r.word, Word{}));
                    edges.push_back(e);
                }
                j["edges"] = edges;
            }
            emit_json(j, json_out);
        };
    });

    auto* floation = app.add_subcommand("floation", "Leaf tracing in the universal cover of a surface");
    auto* trace = floation->add_subcommand("trace", "Trace one leaf from a base triangle");
    floation->require_subcommand(1);
    std::string start_arg = "0";
    trace->add_option("--complex", complex_arg, "Surface complex")->required();
    trace->add_option("--order", order_arg, "Order file")->required();
    trace->add_option("--start", start_arg, "T or T,W: base triangle T, level W in (0,1) between its extreme corners")
        ->capture_default_str();
    trace->add_option("--json", json_out, "Output path");
    trace->callback([&] {
        run = [&] {
            auto t = load_triangulation2(resolve_complex(complex_arg));
            OrderOracle o = load_order_file(resolve_order(order_arg), context_of(t, g.precision_bits));
            std::optional<LiftedBall> ball;
            if (g.radius) {
                std::vector<Word> gens;
                for (std::size_t i = 0; i < t.basis.rank(); ++i) gens.push_back(Word::generator(i));
                auto table = minimal_embed(o, breadth_first_ball(gens, *g.radius, oracle_keyer(o)));
                ball.emplace(build_ball(t, o, Valuation::table(table, o), g.radius));
            } else {
                ball.emplace(build_ball(t, o, Valuation::functional(o), std::nullopt));
            }
            LeafStart start = parse_start(start_arg, *ball);
            auto tr = trace_leaf(*ball, start, g.max_crossings);
            json j = trace_to_json(tr, *ball);
            j["valuation"] = ball->valuation().kind();
            emit_json(j, json_out);
        };
    });

    auto* torus = app.add_subcommand("torus", "Torus experiments");
    auto* classify = torus->add_subcommand("classify", "Closed-leaf detection against the Archimedean property");
    torus->require_subcommand(1);
    complex_arg = "";
    classify->add_option("--order", order_arg, "Z^2 order file")->required();
    classify->add_option("--complex", complex_arg, "Torus complex (default TOR2)");
    classify->add_option("--json", json_out, "Output path");
    classify->callback([&] {
        run = [&] {
            auto t = load_triangulation2(resolve_complex(complex_arg.empty() ? "TOR2" : complex_arg));
            OrderOracle o = load_order_file(resolve_order(order_arg), context_of(t, g.precision_bits));
            const auto* zn = std::get_if<ZnOrder>(&o.backend());
            if (!zn) throw Error(ErrorCode::Order, "NotZnOrder", "torus classification expects a Z^n order");
            auto cert = detect_closed_leaf(t, o, TraceCaps{g.max_crossings});
            const bool arch = is_archimedean(zn->chain);
            json j{{"archimedean", arch}, {"closed_leaf", cert.found}, {"crossings", cert.crossings}};
            j["closed_leaf_class"] = cert.found ? json(cert.period_class) : json(nullptr);
            if (cert.found) {
                j["period_word"] = format_word(cert.period_word, t.basis);
                j["period"] = cert.period;
                j["kernel_check"] = cert.kernel_check;
            }
            auto k = kernel_generator(zn->chain);
            j["kernel_generator"] = k ? json(*k) : json(nullptr);
            if (arch == cert.found)
                throw Error(ErrorCode::Theorem, "ClassificationMismatch",
                            std::string("closed leaf ") + (cert.found ? "found" : "not found") + " for an order that is " +
                                (arch ? "" : "not ") + "Archimedean");
            if (cert.found && !cert.kernel_check)
                throw Error(ErrorCode::Theorem, "ClassificationMismatch", "closed-leaf class is not the kernel generator");
            emit_json(j, json_out);
        };
    });

    bool polylines = false;
    auto* straighten = app.add_subcommand("straighten", "Straighten sampled leaves to a geodesic lamination");
    straighten->add_option("--complex", complex_arg, "Surface complex with a fundamental polygon")->required();
    straighten->add_option("--order", order_arg, "surface_lex order file")->required();
    straighten->add_option("--json", json_out, "Output path");
    straighten->add_option("--svg", svg_out, "Poincare-disk rendering");
    straighten->add_flag("--polylines", polylines, "Include developed leaf paths");
    straighten->callback([&] {
        run = [&] {
            auto t = load_triangulation2(resolve_complex(complex_arg));
            OrderOracle o = load_order_file(resolve_order(order_arg), context_of(t, g.precision_bits));
            const HyperbolicModel m = build_model(t);
            StraightenConfig cfg{g.eps, g.max_crossings, g.samples, g.seed, true};
            Lamination l = straighten_lamination(m, build_ball(t, o, Valuation::functional(o), std::nullopt), cfg);
            json j{{"complex", t.name},
                   {"eps", g.eps},
                   {"seed", g.seed},
                   {"max_crossings", g.max_crossings},
                   {"model", {{"relation_residual", m.relation_residual}, {"vertex_residual", m.vertex_residual}}},
                   {"lamination", lamination_to_json(l, polylines)}};
            if (!svg_out.empty()) emit(render_lamination_svg(l, &m, SvgOptions{600, polylines}), svg_out);
            emit_json(j, json_out);
            if (!l.linked_pairs.empty())
                throw Error(ErrorCode::Theorem, "LinkedGeodesics",
                            std::to_string(l.linked_pairs.size()) + " pairs of straightened leaves cross");
        };
    });

    std::string delta_arg = "0,1,0,-1", sizes_arg = "1/10,1/100,1/1000";
    auto* perturb = app.add_subcommand("perturb", "Continuity experiment: perturb the H1 functional");
    perturb->add_option("--complex", complex_arg, "Surface complex")->required();
    perturb->add_option("--order", order_arg, "surface_lex order file")->required();
    perturb->add_option("--delta", delta_arg, "Rational perturbation direction")->capture_default_str();
    perturb->add_option("--sizes", sizes_arg, "Perturbation sizes")->capture_default_str();
    perturb->add_option("--json", json_out, "Output path");
    perturb->callback([&] {
        run = [&] {
            auto t = load_triangulation2(resolve_complex(complex_arg));
            OrderOracle o = load_order_file(resolve_order(order_arg), context_of(t, g.precision_bits));
            StraightenConfig cfg{g.eps, g.max_crossings, g.samples, g.seed, true};
            auto r = perturb_and_compare(t, o, parse_rationals(delta_arg), parse_rationals(sizes_arg), cfg);
            json sizes = json::array();
            for (const auto& s : r.sizes) sizes.push_back(s.get_str());
            emit_json({{"sizes", sizes}, {"distances", r.distances}, {"non_increasing", r.non_increasing}, {"eps", g.eps}},
                      json_out);
        };
    });

    std::string direction_arg;
    bool enumerate = false;
    auto* audit3 = app.add_subcommand("audit3", "Edge-direction audit of a 3-dimensional triangulation");
    audit3->add_option("--complex", complex_arg, "3-dimensional complex")->required();
    auto* source = audit3->add_option_group("source");
    source->add_option("--order", order_arg, "Order inducing the direction");
    source->add_option("--direction", direction_arg, "Signs over edge ids, e.g. +-+++-- or 1,-1,...");
    source->add_flag("--enumerate", enumerate, "All 2^E directions");
    source->require_option(1);
    audit3->add_option("--json", json_out, "Output path");
    audit3->add_option("--csv", csv_out, "Enumeration table");
    audit3->callback([&] {
        run = [&] {
            auto t = load_triangulation3(resolve_complex(complex_arg));
            if (enumerate) {
                auto e = enumerate_directions(t);
                emit(enumeration_csv(e), csv_out.empty() && json_out.empty() ? "-" : csv_out);
                json j = enumeration_summary(e);
                j["complex"] = t.name;
                j["abelian"] = provably_abelian(t);
                if (!json_out.empty()) emit_json(j, json_out);
                else if (!csv_out.empty()) emit_json(j, "-");
                return;
            }
            Direction d = !order_arg.empty()
                              ? order_induced_direction(t, load_order_file(resolve_order(order_arg), context_of(t, g.precision_bits)))
                              : parse_direction(direction_arg, t.edge_count());
            auto tets = validate_direction(t, d);
            json j;
            if (std::all_of(tets.begin(), tets.end(), [](const TetStatus& s) { return s.valid; })) {
                j = audit_to_json(t, d, decide_regularity(t, d));
            } else {
                AuditReport r = check_local_orientation(t, d);
                j = audit_to_json(t, d, r);
            }
            j["source"] = !order_arg.empty() ? "order" : "direction";
            emit_json(j, json_out);
        };
    });

    std::vector<std::string> lam_files;
    auto* compare = app.add_subcommand("compare-laminations", "Hausdorff distance between two straighten outputs");
    compare->add_option("files", lam_files, "Two lamination JSON files")->required()->expected(2);
    compare->add_option("--json", json_out, "Output path");
    compare->callback([&] {
        run = [&] {
            auto a = read_lamination(lam_files[0]), b = read_lamination(lam_files[1]);
            double d = compare_laminations(a, b);
            emit_json({{"distance", d}, {"leaves", {a.leaves.size(), b.leaves.size()}}, {"within_2eps", d < 2 * g.eps}},
                      json_out);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorCode::Usage);
    }
    try {
        if (g.precision_bits < 64) throw Error(ErrorCode::Usage, "BadPrecision", "--precision-bits must be at least 64");
        if (!(g.eps > 0)) throw Error(ErrorCode::Usage, "BadEps", "--eps must be positive");
        run();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const json::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << "\n";
        return static_cast<int>(ErrorCode::Parse);
    }
    return 0;
}
