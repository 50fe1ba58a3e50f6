#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pgz/descriptors.hpp"
#include "pgz/eiskernel.hpp"
#include "pgz/qexp.hpp"
#include "pgz/sweep.hpp"
#include "pgz/toric.hpp"

using namespace pgz;

namespace {

struct Globals {
    std::string report;
    int threads = 1;
    uint64_t budget = 10000000;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::InvalidInput, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// inline JSON, or @path
json arg_json(const std::string& s) {
    std::string text = !s.empty() && s[0] == '@' ? read_file(s.substr(1)) : s;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::InvalidInput, "not valid JSON: " + s);
    return j;
}

json cj(const CycNum& x) { return json{{"value", cyc_to_json(x)}, {"str", x.str()}}; }

void strip_timing(json& j) {
    if (j.is_object()) {
        j.erase("timing_ms");
        for (auto& [k, v] : j.items()) strip_timing(v);
    } else if (j.is_array()) {
        for (auto& v : j) strip_timing(v);
    }
}

std::string sha256_hex(const std::string& s) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        out += buf;
    }
    return out;
}

void write_report(const Globals& g, json body) {
    if (g.report.empty()) return;
    json canon = body;
    strip_timing(canon);
    body["sha256"] = sha256_hex(canon.dump());
    std::ofstream f(g.report);
    if (!f) fail(ErrorKind::InvalidInput, "cannot write " + g.report);
    f << body.dump(2) << "\n";
}

json wrap(const std::string& cmd, const json& args, const json& result, bool pass) {
    return json{{"artifact", "pgz"}, {"version", kVersion}, {"command", cmd}, {"arguments", args},
                {"result", result},  {"pass", pass}};
}

int emit(const Globals& g, const std::string& cmd, const json& args, const json& result, bool pass) {
    std::cout << result.dump(2) << "\n";
    write_report(g, wrap(cmd, args, result, pass));
    return pass ? 0 : 1;
}

ToricTuple tuple_from(const json& j) {
    int64_t p = j.at("p").get<int64_t>();
    LocalField F = LocalField::Qp(p);
    json cd = j.at("chi");
    cd["p"] = p;
    MulChar chi = character_from_json(cd);
    MulChar om = MulChar::trivial(F);
    if (j.contains("omega")) {
        json od = j.at("omega");
        od["p"] = p;
        om = character_from_json(od);
    }
    return make_toric_tuple(p, alpha_for_prime(j.value("alpha", json(1)), p), chi, om,
                            AddChar{twist_for_prime(j.value("psi", json(1)), p)});
}

Mono alpha_arg(const std::string& s, int64_t p) {
    json j = json::parse(s, nullptr, false);
    return alpha_for_prime(j.is_discarded() ? json(s) : j, p);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pgz: exact local p-adic computations with independent oracle checks"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--report", g.report, "write a JSON report (with SHA-256 over the timing-free content)");
    app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::Range(1, 256));
    app.add_option("--budget", g.budget, "coset budget per integral");

    std::function<int()> action;

    // zw
    auto* zw = app.add_subcommand("zw", "basic local integral: closed form and coset-sum oracle");
    std::string zw_chi, zw_alpha = "1", zw_psi = "1";
    zw->add_option("--chi", zw_chi, "character descriptor (JSON or @file)")->required();
    zw->add_option("--alpha", zw_alpha, "alpha(varpi): rational, \"zeta(n)^k\", {rational, root} or \"unit\"");
    zw->add_option("--psi", zw_psi, "additive twist s (or \"gen\")");
    zw->callback([&] {
        action = [&] {
            json cd = arg_json(zw_chi);
            LocalDatum d = datum_from_json(cd);
            json ps = json::parse(zw_psi, nullptr, false);
            ZwInput in = zw_input(d, 0, alpha_arg(zw_alpha, d.p), character_from_json(cd),
                                  AddChar{twist_for_prime(ps.is_discarded() ? json(zw_psi) : ps, d.p)});
            Budget b{g.budget};
            CycNum c = zw_closed(in), o = zw_bruteforce(in, &b);
            json r{{"closed", cj(c)}, {"oracle", cj(o)}, {"equal", c == o}, {"exceptional", is_exceptional(in)}};
            return emit(g, "zw", json{{"chi", cd}, {"alpha", zw_alpha}, {"psi", zw_psi}}, r, c == o);
        };
    });

    // gauss
    auto* ga = app.add_subcommand("gauss", "Gauss sum of a ramified character");
    std::string ga_chi;
    int64_t ga_psi = 1;
    ga->add_option("--chi", ga_chi, "character descriptor (JSON or @file)")->required();
    ga->add_option("--psi", ga_psi, "additive twist s");
    ga->callback([&] {
        action = [&] {
            json cd = arg_json(ga_chi);
            MulChar chi = character_from_json(cd);
            Budget b{g.budget};
            CycNum t = gauss_sum(chi, AddChar{ga_psi}, &b);
            Q Nf = conductor_norm(chi);
            CycNum prod = gauss_sum_normalized(chi, AddChar{ga_psi}, &b) * gauss_sum_normalized(chi.inv(), AddChar{ga_psi}, &b);
            bool ok = prod == CycNum(Q(chi.sign()) / Nf);
            json r{{"tau", cj(t)},
                   {"normalized", cj(t.scaled(1 / Nf))},
                   {"conductor_norm", Nf.get_str()},
                   {"norm_identity", ok}};
            return emit(g, "gauss", json{{"chi", cd}, {"psi", ga_psi}}, r, ok);
        };
    });

    // interp
    auto* ip = app.add_subcommand("interp", "interpolation factor at a place above p");
    std::string ip_datum, ip_alpha = "1", ip_omega, ip_sa, ip_sb;
    std::vector<std::string> ip_chis;
    int64_t ip_psi = 1;
    ip->add_option("--datum", ip_datum, "{p, quad_type, u0?}")->required();
    ip->add_option("--alpha", ip_alpha, "alpha(varpi)");
    ip->add_option("--chi", ip_chis, "character descriptor per place above p")->required();
    ip->add_option("--omega", ip_omega, "central character descriptor on Q_p (default trivial)");
    ip->add_option("--satake-alpha", ip_sa, "(|.| alpha)(varpi) as a Mono descriptor")->required();
    ip->add_option("--satake-beta", ip_sb, "beta(varpi) as a Mono descriptor")->required();
    ip->add_option("--psi", ip_psi, "additive twist s");
    ip->callback([&] {
        action = [&] {
            LocalDatum d = datum_from_json(arg_json(ip_datum));
            std::vector<MulChar> chis;
            for (const auto& c : ip_chis) chis.push_back(character_from_json(arg_json(c)));
            MulChar om = ip_omega.empty() ? MulChar::trivial(d.F()) : character_from_json(arg_json(ip_omega));
            SatakeInput s{mono_from_json(arg_json(ip_sa)), mono_from_json(arg_json(ip_sb))};
            Mono al = alpha_arg(ip_alpha, d.p);
            CycNum z = interpolation_factor_Zv(d, al, chis, AddChar{ip_psi}, om, s);
            json zws = json::array();
            for (std::size_t w = 0; w < chis.size(); ++w)
                zws.push_back(cj(zw_closed(zw_input(d, static_cast<int>(w), al, chis[w], AddChar{ip_psi}))));
            json r{{"Z_v", cj(z)}, {"Z_w", zws}, {"L_half", cj(L_half(d, chis, s))}};
            return emit(g, "interp", json{{"datum", datum_to_json(d)}, {"alpha", ip_alpha}}, r, true);
        };
    });

    // rcirc
    auto* rc = app.add_subcommand("rcirc", "R-circ at a split place: enumeration at r0, r0+1 and the product formula");
    std::string rc_tuple;
    rc->add_option("--tuple", rc_tuple, "{p, alpha, chi, omega?, psi?} (JSON or @file)")->required();
    rc->callback([&] {
        action = [&] {
            json tj = arg_json(rc_tuple);
            ToricTuple t = tuple_from(tj);
            Budget b{g.budget};
            int r0 = level_threshold(t);
            CycNum v0 = R_circ_bruteforce(t, r0, &b).value, v1 = R_circ_bruteforce(t, r0 + 1, &b).value;
            CycNum pr = R_circ_product(t);
            bool ok = v0 == v1 && v0 == pr;
            json r{{"r0", r0}, {"enumerated_r0", cj(v0)}, {"enumerated_r0_plus_1", cj(v1)}, {"product", cj(pr)}, {"pass", ok}};
            return emit(g, "rcirc", tj, r, ok);
        };
    });

    // toric
    auto* to = app.add_subcommand("toric", "Iwahori terms Q#(i, c) and R-circ by both routes");
    std::string to_tuple;
    int to_r = 0;
    to->add_option("--tuple", to_tuple, "{p, alpha, chi, omega?, psi?} (JSON or @file)")->required();
    to->add_option("--level", to_r, "level r (default r0)");
    to->callback([&] {
        action = [&] {
            json tj = arg_json(to_tuple);
            ToricTuple t = tuple_from(tj);
            Budget b{g.budget};
            int r = to_r > 0 ? to_r : level_threshold(t);
            QSharpResult q = iwahori_terms_Q_sharp(t, r, &b);
            QSharpReport rep = verify_Q_sharp_identity(t, r, &b);
            json terms = json::object();
            for (const auto& term : q.terms)
                terms["(" + std::to_string(term.i) + "," + std::to_string(term.c) + ")"] = cj(term.value);
            json r_out{{"level", r},
                       {"terms", terms},
                       {"total", cj(q.total)},
                       {"R_circ_enumerated", cj(rep.r_circ_brute)},
                       {"R_circ_product", cj(rep.r_circ_product)},
                       {"mismatches", rep.mismatches},
                       {"pass", rep.ok}};
            return emit(g, "toric", tj, r_out, rep.ok);
        };
    });

    // oracle
    auto* orc = app.add_subcommand("oracle", "ad-hoc annulus integral of chi (times psi o Tr) by coset enumeration");
    std::string or_chi;
    int or_lo = 0, or_hi = 0;
    int64_t or_psi = 0;
    std::string or_measure = "multiplicative";
    orc->add_option("--chi", or_chi, "character descriptor (JSON or @file)")->required();
    orc->add_option("--from", or_lo, "first annulus n")->required();
    orc->add_option("--to", or_hi, "last annulus n")->required();
    orc->add_option("--psi", or_psi, "additive twist s; 0 omits the additive character");
    orc->add_option("--measure", or_measure, "multiplicative | additive_unit | additive_self_dual | additive_discriminant");
    orc->callback([&] {
        action = [&] {
            json cd = arg_json(or_chi);
            MulChar chi = character_from_json(cd);
            const LocalField K = chi.field();
            Measure m = Measure::multiplicative;
            bool found = false;
            for (Measure x : {Measure::multiplicative, Measure::additive_unit, Measure::additive_self_dual,
                              Measure::additive_discriminant})
                if (or_measure == measure_name(x)) m = x, found = true;
            if (!found) fail(ErrorKind::InvalidInput, "unknown measure " + or_measure);
            if (or_hi < or_lo) fail(ErrorKind::InvalidInput, "--to below --from");
            StructuredIntegrand s;
            s.K = K;
            s.measure = m;
            const int c = chi.conductor();
            const int need = or_psi ? std::max(0, -or_lo) : 0;
            s.L = lcm_u64(chi.unit_order(), static_cast<uint64_t>(ipow(K.p, need)));
            s.precision = [c, K, psi = or_psi](int n) { return std::max({c, psi ? -n - K.delta : 0, 1}); };
            Mono at = chi.at_uniformizer();
            s.factor = [at](int n) { return at.pow(n); };
            const uint64_t L = s.L;
            AddChar psi{or_psi};
            s.unit_exps = [chi, psi, L](int n, const UnitGroup& G, uint32_t* out) {
                fill_char_exps(chi, G, L, out);
                if (psi.s == 0) return;
                std::vector<uint32_t> add(G.size());
                fill_psi_exps(psi, n, G, L, add.data());
                add_exps(out, add.data(), L, G.size());
            };
            Budget b{g.budget};
            json ann = json::object();
            CycNum total;
            for (int n = or_lo; n <= or_hi; ++n) {
                CycNum v = annulus_value(s, n, &b);
                ann[std::to_string(n)] = cj(v);
                total = total + v;
            }
            json r{{"annuli", ann}, {"total", cj(total)}, {"cosets", b.used}};
            return emit(g, "oracle", json{{"chi", cd}, {"from", or_lo}, {"to", or_hi}, {"psi", or_psi}}, r, true);
        };
    });

    // eis
    auto* ei = app.add_subcommand("eis", "local Whittaker polynomial of the Eisenstein series");
    int64_t ei_p = 3, ei_u0 = 1;
    std::string ei_type = "inert", ei_a = "1", ei_u = "1";
    ei->add_option("--p", ei_p, "prime")->required();
    ei->add_option("--type", ei_type, "split | inert | ramified");
    ei->add_option("--u0", ei_u0, "ramified: E = Q_p(sqrt(p u0))");
    ei->add_option("--a", ei_a, "index a (rational)");
    ei->add_option("--u", ei_u, "unit u scaling the form");
    ei->callback([&] {
        action = [&] {
            LocalDatum d = datum_from_json(json{{"p", ei_p}, {"quad_type", ei_type}, {"u0", ei_u0}});
            Q a(ei_a), u(ei_u);
            a.canonicalize();
            u.canonicalize();
            QuadSpaceLocal s = QuadSpaceLocal::from_datum(d, u);
            WhittakerPoly w = whittaker_poly(s, a);
            auto sw = siegel_weil_rhs(s, a);
            json r{{"space", s.str()},
                   {"series", w.series.to_json()},
                   {"poly", w.poly.to_json()},
                   {"poly_str", w.poly.str()},
                   {"l_factor_divided", w.l_factor_divided},
                   {"tail_start", w.tail_start},
                   {"tail_constant", w.tail_constant.get_str()},
                   {"value_at_1", cj(w.poly.eval_at_one())},
                   {"derivative_at_1", cj(derivative_at_one(w.poly))},
                   {"siegel_weil", sw ? json(sw->get_str()) : json(nullptr)}};
            return emit(g, "eis", json{{"p", ei_p}, {"type", ei_type}, {"a", ei_a}, {"u", ei_u}}, r, true);
        };
    });

    // dkernel
    auto* dk = app.add_subcommand("dkernel", "derivative kernel at a good inert place");
    int64_t dk_p = 3;
    int dk_v = 1;
    std::string dk_u = "1";
    dk->add_option("--p", dk_p, "inert prime")->required();
    dk->add_option("--v", dk_v, "v(q(x2))")->required();
    dk->add_option("--u", dk_u, "unit u");
    dk->callback([&] {
        action = [&] {
            Q u(dk_u);
            u.canonicalize();
            Q raw = derivative_kernel_raw(dk_p, dk_v, u);
            Q k = derivative_kernel_k_natural(dk_p, dk_v, u);
            json r{{"k_natural", k.get_str()}, {"minus_W_prime_over_vol", raw.get_str()}};
            return emit(g, "dkernel", json{{"p", dk_p}, {"v", dk_v}, {"u", dk_u}}, r, true);
        };
    });

    // theta
    auto* th = app.add_subcommand("theta", "representation numbers of an imaginary quadratic order");
    int64_t th_disc = -4;
    int th_from = 0, th_to = 20;
    std::string th_u = "1";
    th->add_option("--disc", th_disc, "discriminant D < 0");
    th->add_option("--from", th_from, "first a");
    th->add_option("--to", th_to, "last a");
    th->add_option("--u", th_u, "scaling u");
    th->callback([&] {
        action = [&] {
            ThetaLattice lat;
            lat.disc = th_disc;
            Q u(th_u);
            u.canonicalize();
            json tab = json::object();
            bool ok = true;
            Budget b{g.budget};
            for (int a = th_from; a <= th_to; ++a) {
                Z r = theta_rep_number(lat, a, u, &b);
                Z o = theta_rep_number_oracle(lat, a, u);
                ok = ok && r == o;
                tab[std::to_string(a)] = json{{"count", r.get_str()}, {"oracle", o.get_str()}};
            }
            json r{{"table", tab}, {"pass", ok}};
            return emit(g, "theta", json{{"disc", th_disc}, {"from", th_from}, {"to", th_to}, {"u", th_u}}, r, ok);
        };
    });

    // kernel
    auto* ke = app.add_subcommand("kernel", "kernel coefficients for a scenario file");
    std::string ke_file;
    ke->add_option("scenario", ke_file, "key = value scenario file")->required()->check(CLI::ExistingFile);
    ke->callback([&] {
        action = [&] {
            json kv = parse_kv_text(read_file(ke_file));
            static const std::vector<std::string> keys = {"disc", "p", "a_min", "a_max", "u", "coherent", "flip_prime",
                                                          "c_const", "class_number", "chi_point", "chi_F_minus1"};
            for (auto& [k, v] : kv.items())
                if (std::find(keys.begin(), keys.end(), k) == keys.end())
                    fail(ErrorKind::InvalidInput, "unknown scenario key: " + k);
            KernelScenario sc;
            sc.disc = kv.value("disc", int64_t(-4));
            sc.p = kv.value("p", int64_t(5));
            sc.lattice.disc = sc.disc;
            sc.coherent = kv.value("coherent", false);
            sc.flip_prime = kv.value("flip_prime", int64_t(2));
            sc.class_number = kv.value("class_number", int64_t(1));
            sc.chi_F_minus1 = kv.value("chi_F_minus1", 1);
            if (kv.contains("c_const")) sc.c_const = rational_from_json(kv["c_const"]);
            if (kv.contains("u")) {
                sc.u_range.clear();
                for (const auto& x : kv["u"]) sc.u_range.push_back(rational_from_json(x));
            }
            if (kv.contains("chi_point"))
                for (auto& [v, m] : kv["chi_point"].items()) sc.X[std::stoll(v)] = mono_from_json(m).to_cyc();
            const int lo = kv.value("a_min", 1), hi = kv.value("a_max", 20);
            json tab = json::array();
            for (int a = lo; a <= hi; ++a) {
                Budget b{g.budget};
                KernelCoefficient kc = kernel_coefficient(sc, a, &b);
                json row{{"a", a}, {"value", cj(kc.value)}, {"terms", kc.terms.size()}};
                if (kc.constant_term_flagged) row["constant_term_flagged"] = true;
                if (a != 0) {
                    auto w = incoherence_witness(sc, a, sc.u_range.front(), 1000);
                    row["witness"] = w ? (w->archimedean ? json("infinity") : json(w->prime)) : json(nullptr);
                }
                tab.push_back(row);
            }
            json r{{"coefficients", tab}};
            return emit(g, "kernel", kv, r, true);
        };
    });

    // qexp
    auto* qe = app.add_subcommand("qexp", "apply a Hecke / U / projector pipeline to a reduced q-expansion");
    std::string qe_in, qe_pipe;
    qe->add_option("--input", qe_in, "expansion JSON (or @file)")->required();
    qe->add_option("--pipeline", qe_pipe, "[{\"op\":\"U\",\"v\":3}, ...] (JSON or @file)")->required();
    qe->callback([&] {
        action = [&] {
            ReducedQExpansion w = qexp_from_json(arg_json(qe_in));
            json log = json::array();
            ReducedQExpansion out = apply_pipeline(w, arg_json(qe_pipe), &log);
            json r{{"output", qexp_to_json(out)}, {"log", log}};
            return emit(g, "qexp", json{{"input", qexp_to_json(w)}, {"pipeline", arg_json(qe_pipe)}}, r, true);
        };
    });

    // verify
    auto* ve = app.add_subcommand("verify", "run verification suites; exit 1 on any mismatch");
    std::string ve_spec, ve_explain;
    std::vector<std::string> ve_suites, ve_types;
    std::vector<int64_t> ve_primes;
    int ve_cmax = -1;
    bool ve_list = false, ve_no_primes = false;
    ve->add_option("--spec", ve_spec, "sweep spec: JSON or key = value file");
    ve->add_option("--suite", ve_suites, "suite names (comma separated)")->delimiter(',');
    ve->add_option("--primes", ve_primes, "primes (comma separated)")->delimiter(',');
    ve->add_flag("--no-primes", ve_no_primes, "use an empty prime list");
    ve->add_option("--types", ve_types, "quadratic types (comma separated)")->delimiter(',');
    ve->add_option("--conductor-max", ve_cmax, "largest character conductor");
    ve->add_option("--explain", ve_explain, "print the intermediate values of one case id");
    ve->add_flag("--list", ve_list, "list case ids without running");
    ve->callback([&] {
        action = [&] {
            SweepSpec spec = ve_spec.empty() ? SweepSpec{} : spec_from_text(read_file(ve_spec));
            json over = spec_to_json(spec);
            if (!ve_suites.empty()) over["suites"] = ve_suites;
            if (!ve_primes.empty()) over["primes"] = ve_primes;
            if (ve_no_primes) over["primes"] = json::array();
            if (!ve_types.empty()) over["quad_types"] = ve_types;
            if (ve_cmax >= 0) over["conductor_max"] = ve_cmax;
            over["budget"] = g.budget;
            spec = spec_from_json(over);
            if (!ve_explain.empty()) {
                std::cout << explain(spec, ve_explain);
                return 0;
            }
            if (ve_list) {
                for (const auto& c : enumerate_cases(spec)) std::cout << c.key << "\n";
                return 0;
            }
            Report rep = run_suite(spec, g.threads);
            json body = rep.to_json(spec);
            for (auto& [name, s] : body["summary"]["suites"].items())
                std::cout << name << ": " << s["passed"] << "/" << s["total"] << " pass\n";
            for (const auto& c : rep.cases)
                if (!c.pass) std::cout << "FAIL " << c.key << (c.error.empty() ? "" : "  [" + c.error + "]") << "\n";
            std::cout << "total " << rep.cases.size() << " cases, " << (rep.all_pass() ? "all pass" : "mismatches found")
                      << "\n";
            write_report(g, body);
            return rep.all_pass() ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::InvalidInput:
            case ErrorKind::UnknownCase:
            case ErrorKind::InvalidCharacter:
            case ErrorKind::BadPlace:
                return 2;
            default:
                return 1;
        }
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: malformed number: " << e.what() << "\n";
        return 2;
    }
}
