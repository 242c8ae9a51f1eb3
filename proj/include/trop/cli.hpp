#pragma once

// Command-line front end: every subcommand reads/writes the JSON formats in
// io.hpp. Exit codes: 0 success, 1 domain error (machine-readable error
// JSON on stdout), 2 usage error.

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trop/dot.hpp"
#include "trop/io.hpp"
#include "trop/random.hpp"

namespace trop {

namespace cli_detail {

struct Ctx {
    std::ostream& out;
    std::ostream& err;
    std::string out_path;
    std::uint64_t seed = 0;
    int trials = 100;

    void emit(const std::string& text) const {
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw Error(Err::ParseError, "cannot write '" + out_path + "'");
            file << text;
        }
    }
};

inline RatFun load_fn(const std::string& path) { return ratfun_from_json(load_json(path)); }

inline CurvePtr load_curve(const std::string& path) {
    Json j = load_json(path);
    return curve_from_json(j);
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using cli_detail::Ctx;
    CLI::App app{"exact tropical curves, rational function semifields, and expansive-map recovery"};
    app.require_subcommand(1);
    Ctx ctx{out, err, "", 0, 100};
    app.add_option("--out", ctx.out_path, "write the result to a file instead of stdout");
    app.add_option("--seed", ctx.seed, "seed for randomized suites");
    app.add_option("--trials", ctx.trials, "trial count for randomized suites");

    std::function<void()> action;

    // ---- curve queries
    std::string curve_path, fn_path, fn2_path, map_path, map2_path, sub_path, data_path;
    std::string point_a, point_b, scalar, suite, samples_path;
    bool with_divisor = false, generators = false;

    auto* c_genus = app.add_subcommand("genus", "genus of a curve");
    c_genus->add_option("--curve", curve_path)->required();
    c_genus->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            ctx.emit(std::to_string(c->genus()) + "\n");
        };
    });

    auto* c_canon = app.add_subcommand("canonical-model", "canonical model of a curve");
    c_canon->add_option("--curve", curve_path)->required();
    c_canon->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            ctx.emit(dump_json(curve_to_json(*build_curve(canonical_model(*c)))));
        };
    });

    auto* c_classify = app.add_subcommand("classify", "star-infinite and dilation classification");
    c_classify->add_option("--curve", curve_path)->required();
    c_classify->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            Json j;
            j["star_infinite"] = is_star_infinite(*c);
            j["has_nonunit_dilation"] = has_nonunit_dilation(*c);
            if (has_nonunit_dilation(*c)) {
                j["witness_r"] = "2";
                j["witness"] = map_to_json(dilation_witness(c, Rat(2)));
            }
            ctx.emit(dump_json(j));
        };
    });

    auto* c_aut = app.add_subcommand("aut", "automorphism generators of a star-shaped curve");
    c_aut->add_option("--curve", curve_path)->required();
    c_aut->add_flag("--generators", generators, "list the generators");
    c_aut->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            auto gens = star_aut_generators(c);
            Json j;
            j["generator_count"] = gens.size();
            std::size_t rays = star_chart(*c).rays.size();
            if (rays != 2) {
                j["closure_size"] = aut_closure(c, gens).size();
            } else {
                j["closure_size"] = nullptr;  // the n = 2 group is infinite
            }
            if (generators) {
                Json list = Json::array();
                for (const auto& g : gens) list.push_back(map_to_json(g));
                j["generators"] = std::move(list);
            }
            ctx.emit(dump_json(j));
        };
    });

    auto* c_export = app.add_subcommand("export-dot", "DOT description of a curve");
    c_export->add_option("--curve", curve_path);
    c_export->add_option("--fn", fn_path);
    c_export->add_flag("--with-divisor", with_divisor, "label the divisor of --fn");
    c_export->callback([&] {
        action = [&] {
            if (!fn_path.empty()) {
                RatFun f = cli_detail::load_fn(fn_path);
                std::optional<Divisor> div;
                if (with_divisor && !f.is_bottom()) div = divisor(f);
                ctx.emit(export_dot(*f.curve(), &f, div ? &*div : nullptr));
            } else if (!curve_path.empty()) {
                auto c = cli_detail::load_curve(curve_path);
                ctx.emit(export_dot(*c));
            } else {
                throw Error(Err::Usage, "export-dot needs --curve or --fn");
            }
        };
    });

    // ---- rational function operations
    auto* c_eval = app.add_subcommand("eval", "evaluate a function at a point");
    c_eval->add_option("--fn", fn_path)->required();
    c_eval->add_option("--at", point_a)->required();
    c_eval->callback([&] {
        action = [&] {
            RatFun f = cli_detail::load_fn(fn_path);
            ctx.emit(f.eval(parse_point(*f.curve(), point_a)).str() + "\n");
        };
    });

    auto* c_oplus = app.add_subcommand("oplus", "tropical sum of two functions");
    c_oplus->add_option("--fn", fn_path)->required();
    c_oplus->add_option("--fn2", fn2_path)->required();
    c_oplus->callback([&] {
        action = [&] {
            ctx.emit(dump_json(ratfun_to_json(oplus(cli_detail::load_fn(fn_path), cli_detail::load_fn(fn2_path)))));
        };
    });

    auto* c_odot = app.add_subcommand("odot", "tropical product of two functions");
    c_odot->add_option("--fn", fn_path)->required();
    c_odot->add_option("--fn2", fn2_path)->required();
    c_odot->callback([&] {
        action = [&] {
            ctx.emit(dump_json(ratfun_to_json(odot(cli_detail::load_fn(fn_path), cli_detail::load_fn(fn2_path)))));
        };
    });

    auto* c_oinv = app.add_subcommand("oinv", "tropical multiplicative inverse");
    c_oinv->add_option("--fn", fn_path)->required();
    c_oinv->callback([&] { action = [&] { ctx.emit(dump_json(ratfun_to_json(oinv(cli_detail::load_fn(fn_path))))); }; });

    auto* c_div = app.add_subcommand("divisor", "zeros and poles with orders");
    c_div->add_option("--fn", fn_path)->required();
    c_div->callback([&] { action = [&] { ctx.emit(dump_json(divisor_to_json(divisor(cli_detail::load_fn(fn_path))))); }; });

    auto* c_ext = app.add_subcommand("extrema", "max/min values and attainment sets");
    c_ext->add_option("--fn", fn_path)->required();
    c_ext->callback([&] {
        action = [&] {
            RatFun f = cli_detail::load_fn(fn_path);
            Json j;
            j["max"] = max_value(f).str();
            j["min"] = min_value(f).str();
            if (!f.is_bottom()) {
                j["argmax"] = subgraph_to_json(argmax_set(f));
                j["argmin"] = subgraph_to_json(argmin_set(f));
            }
            ctx.emit(dump_json(j));
        };
    });

    // ---- chip-firing
    auto* c_cf = app.add_subcommand("cf", "chip-firing move CF(sub; l)");
    c_cf->add_option("--curve", curve_path)->required();
    c_cf->add_option("--sub", sub_path)->required();
    c_cf->add_option("--l", scalar)->required();
    c_cf->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            Subgraph sub = subgraph_from_json(load_json(sub_path), c);
            ctx.emit(dump_json(ratfun_to_json(cf(c, sub, ext_from_string(scalar)))));
        };
    });

    auto* c_cfp = app.add_subcommand("cf-point", "chip-firing move CF({x}; eps)");
    c_cfp->add_option("--curve", curve_path)->required();
    c_cfp->add_option("--x", point_a)->required();
    c_cfp->add_option("--eps", scalar)->required();
    c_cfp->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            ctx.emit(dump_json(ratfun_to_json(cf_point(c, parse_point(*c, point_a), rat_from_string(scalar)))));
        };
    });

    auto* c_cft = app.add_subcommand("cf-tail", "chip-firing move CF(curve minus (y, x]; inf)");
    c_cft->add_option("--curve", curve_path)->required();
    c_cft->add_option("--y", point_a)->required();
    c_cft->add_option("--x", point_b)->required();
    c_cft->callback([&] {
        action = [&] {
            auto c = cli_detail::load_curve(curve_path);
            ctx.emit(dump_json(
                ratfun_to_json(cf_tail(c, parse_point(*c, point_a), parse_point(*c, point_b)))));
        };
    });

    // ---- expansive maps
    auto* c_check = app.add_subcommand("check-expansive", "validate an expansive map");
    c_check->add_option("--map", map_path)->required();
    c_check->callback([&] {
        action = [&] {
            ExpansiveMap m = map_from_json(load_json(map_path));
            Json j;
            j["valid"] = true;
            j["r"] = rat_to_string(m.factor());
            j["automorphism"] = same_curve(*m.source(), *m.target()) && m.factor() == 1;
            ctx.emit(dump_json(j));
        };
    });

    auto* c_compose = app.add_subcommand("compose", "compose two maps (first after second)");
    c_compose->add_option("--map", map_path)->required();
    c_compose->add_option("--map2", map2_path)->required();
    c_compose->callback([&] {
        action = [&] {
            ExpansiveMap m2 = map_from_json(load_json(map_path));
            ExpansiveMap m1 = map_from_json(load_json(map2_path));
            ctx.emit(dump_json(map_to_json(compose(m2, m1))));
        };
    });

    auto* c_harm = app.add_subcommand("check-harmonic", "verify a finite harmonic morphism");
    c_harm->add_option("--data", data_path)->required();
    c_harm->callback([&] {
        action = [&] {
            Json j;
            j["degree"] = verify_harmonic(harmonic_from_json(load_json(data_path)));
            ctx.emit(dump_json(j));
        };
    });

    // ---- semiring isomorphisms
    auto* c_pull = app.add_subcommand("pullback", "apply the pullback isomorphism to a function");
    c_pull->add_option("--map", map_path)->required();
    c_pull->add_option("--fn", fn_path)->required();
    c_pull->callback([&] {
        action = [&] {
            PullbackMap psi = pullback(map_from_json(load_json(map_path)));
            RatFun f = ratfun_from_json(load_json(fn_path), psi.source());
            ctx.emit(dump_json(ratfun_to_json(psi.apply(f))));
        };
    });

    auto* c_recover = app.add_subcommand("recover", "recover the expansive map from the pullback oracle");
    c_recover->add_option("--map", map_path)->required();
    c_recover->add_option("--samples", samples_path, "extra sample points, one per line");
    c_recover->callback([&] {
        action = [&] {
            PullbackMap psi = pullback(map_from_json(load_json(map_path)));
            std::vector<PointRef> samples = psi.source()->canonical_points();
            if (!samples_path.empty()) {
                std::istringstream lines(read_file(samples_path));
                std::string line;
                while (std::getline(lines, line))
                    if (!line.empty()) samples.push_back(parse_point(*psi.source(), line));
            }
            ctx.emit(dump_json(report_to_json(recover_map(psi, std::move(samples)))));
        };
    });

    auto* c_verify = app.add_subcommand("verify", "randomized law suites against a pullback oracle");
    c_verify->add_option("--map", map_path)->required();
    c_verify->add_option("--suite", suite, "lemma4 | cor3 | homlaws")->required();
    c_verify->callback([&] {
        action = [&] {
            ExpansiveMap phi = map_from_json(load_json(map_path));
            PullbackMap psi = pullback(phi);
            RandomGen gen(ctx.seed);
            int passed = 0, failed = 0;
            Json counterexamples = Json::array();
            for (int i = 0; i < ctx.trials; ++i) {
                RatFun f = gen.ratfun(psi.source());
                bool ok = false;
                std::string witness;
                if (suite == "lemma4") {
                    ok = check_lemma4(psi, f, psi.factor());
                } else if (suite == "cor3") {
                    ok = check_divisor_correspondence(psi, phi, f);
                } else if (suite == "homlaws") {
                    ok = check_hom_laws(psi, f, gen.ratfun(psi.source()), &witness);
                } else {
                    throw Error(Err::Usage, "unknown suite '" + suite + "'");
                }
                if (ok) {
                    ++passed;
                } else {
                    ++failed;
                    if (counterexamples.size() < 5) {
                        Json ce;
                        ce["trial"] = i;
                        ce["fn"] = ratfun_to_json(f);
                        if (!witness.empty()) ce["law"] = witness;
                        counterexamples.push_back(std::move(ce));
                    }
                }
            }
            Json j;
            j["suite"] = suite;
            j["seed"] = ctx.seed;
            j["trials"] = ctx.trials;
            j["passed"] = passed;
            j["failed"] = failed;
            if (!counterexamples.empty()) j["counterexamples"] = std::move(counterexamples);
            ctx.emit(dump_json(j));
        };
    });

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        std::vector<const char*> argv;
        argv.push_back("tropc");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        action();
    } catch (const Error& e) {
        Json j;
        j["error"] = {{"code", e.code_name()}, {"message", e.what()}};
        out << dump_json(j);
        return 1;
    }
    return 0;
}

}  // namespace trop
