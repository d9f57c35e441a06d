// SPDX-License-Identifier: MIT
//
// Command-line front end: tabulate the renormalized resolvent, evaluate
// hitting probabilities and excursion rates, price the random-clock
// penalization martingales, run Monte Carlo path experiments, and run the
// self-verification suites.
//
// Exit codes: 0 success, 1 verification/simulation check failure,
// 2 invalid arguments.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levyzero/penalization.hpp"
#include "levyzero/potential.hpp"
#include "levyzero/simulate.hpp"
#include "levyzero/verification.hpp"

namespace {

using nlohmann::json;
using namespace levyzero;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("LEVYZERO_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0x5eedf00dULL;
}

// "a:b:step" inclusive grid.
std::vector<double> parse_grid(const std::string& spec) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
        !(step > 0.0) || hi < lo) {
        throw Error(ErrorCode::InvalidArgument,
                    "grid must be lo:hi:step with step > 0, got '" + spec +
                        "'");
    }
    std::vector<double> xs;
    for (double x = lo; x <= hi + 0.5 * step; x += step) {
        xs.push_back(std::fabs(x) < 1e-12 * (1.0 + std::fabs(hi)) ? 0.0 : x);
    }
    return xs;
}

ClockSpec parse_clock(const std::string& kind, double q, double a, double b,
                      double u) {
    ClockSpec clock;
    if (kind == "exp") {
        clock.kind = ClockKind::Exponential;
        clock.q = q;
    } else if (kind == "hit") {
        clock.kind = ClockKind::LevelHit;
        clock.a = a;
    } else if (kind == "twopoint") {
        clock.kind = ClockKind::TwoLevel;
        clock.a = a;
        clock.b = b;
    } else if (kind == "invlt") {
        clock.kind = ClockKind::InverseLocalTime;
        clock.a = a;
        clock.u = u;
    } else {
        throw Error(ErrorCode::InvalidClock,
                    "unknown clock '" + kind +
                        "' (try exp, hit, twopoint, invlt)");
    }
    return clock;
}

std::string clock_label(const ClockSpec& c) {
    switch (c.kind) {
        case ClockKind::Exponential:
            return "exponential(q=" + std::to_string(c.q) + ")";
        case ClockKind::LevelHit:
            return "level-hit(a=" + std::to_string(c.a) + ")";
        case ClockKind::TwoLevel:
            return "two-level(a=" + std::to_string(c.a) +
                   ", b=" + std::to_string(c.b) + ")";
        case ClockKind::InverseLocalTime:
            return "inverse-local-time(a=" + std::to_string(c.a) +
                   ", u=" + std::to_string(c.u) + ")";
    }
    return "?";
}

json row_to_json(const MCRow& r) {
    json j;
    j["name"] = r.name;
    j["model"] = r.model;
    j["params"] = r.params;
    j["estimate"] = r.estimate;
    j["stderr"] = r.std_error;
    j["target"] = r.target;
    j["sigmas"] = r.sigmas;
    j["deterministic_tol"] = r.det_tol;
    j["pass"] = r.pass;
    j["censor_rate"] = r.censor_rate;
    j["runtime_s"] = r.runtime_s;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::InvalidArgument,
                    "cannot open output file '" + path + "'");
    }
    out << text;
}

// ---------------------------------------------------------------------------

int cmd_h_table(const std::string& model_spec, const std::string& xs,
                double gamma, const std::string& out) {
    const LevyModel m = parse_model(model_spec);
    const PotentialTable pot(m, gamma);
    std::string csv = "x,h,h_tilted\n";
    char line[128];
    for (double x : parse_grid(xs)) {
        std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", x, pot.h(x),
                      pot.h_tilted(x));
        csv += line;
    }
    if (out.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        write_text(out, csv);
        std::printf("wrote %s\n", out.c_str());
    }
    return 0;
}

int cmd_hitprob(const std::string& model_spec, double x, double a, double b,
                std::optional<double> c) {
    const LevyModel m = parse_model(model_spec);
    const PotentialTable pot(m);
    if (c) {
        const double p = pot.hit_prob_three(x, a, b, *c);
        std::printf("P_x(T_a < T_b and T_a < T_c) = %.6f\n", p);
        std::printf("model: %s, x=%g, a=%g, b=%g, c=%g\n",
                    describe(m).c_str(), x, a, b, *c);
    } else {
        const double p = pot.hit_prob_two(x, a, b);
        std::printf("%.6f\n", p);
        std::printf("P_x(T_a < T_b), model: %s, x=%g, a=%g, b=%g\n",
                    describe(m).c_str(), x, a, b);
    }
    return 0;
}

int cmd_excursion(const std::string& model_spec, double a) {
    const LevyModel m = parse_model(model_spec);
    const PotentialTable pot(m);
    const auto rates = pot.excursion_rates(a);
    std::printf("excursion rates per unit local time at zero, level a=%g\n",
                a);
    std::printf("  reach a:                      %.10g\n",
                rates.hit_before_return);
    std::printf("  reach a and return to zero:   %.10g\n",
                rates.hit_before_finite_return);
    std::printf("model: %s, h_two_sided(a)=%.10g\n", describe(m).c_str(),
                pot.h_two_sided(a));
    return 0;
}

int cmd_penalize(const std::string& model_spec, const std::string& clock_kind,
                 double q, double a, double b, double u,
                 const std::string& weight_spec, double x0, double l0,
                 double level_lt) {
    const LevyModel m = parse_model(model_spec);
    const PotentialTable pot(m);
    const WeightFunction f = parse_weight(weight_spec);

    if (!pot.recurrent()) {
        // Transient model: the clock structure degenerates; report the
        // transient penalization instead.
        const MartingaleState s{x0, l0, 0.0, true, {}};
        const MartingaleState s0{0.0, 0.0, 0.0, true, {}};
        const double mval = transient_martingale(pot, f, s);
        const double m0 = transient_martingale(pot, f, s0);
        std::printf("transient model: total local time at zero ~ "
                    "exponential(kappa)\n");
        std::printf("  kappa                         = %.10g\n",
                    pot.drift_kappa());
        std::printf("  martingale at (x=%g, l=%g)    = %.10g\n", x0, l0, mval);
        std::printf("  value at start (x=0, l=0)     = %.10g\n", m0);
        std::printf("  E[f(total local time)]        = %.10g\n",
                    pot.drift_kappa() * m0);
        return 0;
    }

    const ClockSpec clock = parse_clock(clock_kind, q, a, b, u);
    MartingaleState s{x0, l0, 0.0, true, {}};
    MartingaleState s0{0.0, 0.0, 0.0, true, {}};
    if (clock.kind == ClockKind::InverseLocalTime) {
        s.level_local_time = level_lt;
        s0.level_local_time = 0.0;
    }
    const double cond = clock_conditional(pot, clock, f, s);
    const double m0 = clock_conditional(pot, clock, f, s0);
    const double gamma = clock_limit_tilt(clock);
    std::printf("clock: %s, weight: %s, model: %s\n",
                clock_label(clock).c_str(), weight_spec.c_str(),
                describe(m).c_str());
    std::printf("  conditional at (x=%g, l=%g)   = %.10g\n", x0, l0, cond);
    std::printf("  value at start (x=0, l=0)     = %.10g\n", m0);
    std::printf("  normalizer                    = %.10g\n",
                clock_normalizer(pot, clock));
    std::printf("  limit tilt gamma              = %.10g\n", gamma);
    std::printf("  limit martingale at the state = %.10g\n",
                martingale_weight_tilted(pot, gamma, f, s));
    return 0;
}

int cmd_simulate(const std::string& model_spec, const std::string& clock_kind,
                 double q, double a, double b, double u,
                 const std::string& weight_spec, std::size_t paths,
                 double dt_min, double t_max, std::vector<double> grid,
                 std::uint64_t seed, const std::string& out) {
    const LevyModel m = parse_model(model_spec);
    const PotentialTable pot(m);
    const WeightFunction f = parse_weight(weight_spec);
    const ClockSpec clock = parse_clock(clock_kind, q, a, b, u);
    if (grid.empty()) grid = {0.25, 0.5, 1.0};
    std::sort(grid.begin(), grid.end());
    SimOptions opt;
    if (dt_min > 0.0) opt.dt_min = dt_min;
    PathSimulator sim(m, opt);

    const bool want_csv = out.size() >= 4 &&
                          out.compare(out.size() - 4, 4, ".csv") == 0;
    std::string csv = "path,t,x,local_zero,alive,doob\n";
    std::vector<verify_detail::MeanVar> acc(grid.size());
    std::size_t censored = 0;
    for (std::size_t i = 0; i < paths; ++i) {
        PathRng rng(seed, i);
        const auto path = sim.run_clock_path(rng, clock, grid, t_max);
        if (!path) {
            ++censored;
            continue;
        }
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto& st = (*path)[g];
            const double doob = clock_doob(pot, clock, f, st);
            acc[g].add(doob);
            if (want_csv) {
                char line[160];
                std::snprintf(line, sizeof(line),
                              "%zu,%.10g,%.10g,%.10g,%d,%.10g\n", i, st.t,
                              st.x, st.l, st.alive ? 1 : 0, doob);
                csv += line;
            }
        }
    }
    MartingaleState s0{0.0, 0.0, 0.0, true, {}};
    if (clock.kind == ClockKind::InverseLocalTime) s0.level_local_time = 0.0;
    const double target = clock_doob(pot, clock, f, s0);

    json rep;
    rep["model"] = describe(m);
    rep["clock"] = clock_label(clock);
    rep["weight"] = weight_spec;
    rep["paths"] = paths;
    rep["censor_rate"] =
        static_cast<double>(censored) / static_cast<double>(paths);
    rep["target"] = target;
    bool all_pass = true;
    json rows = json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double est = acc[g].mean;
        const double se = acc[g].sem();
        const double sigmas = std::fabs(est - target) / se;
        const bool pass =
            sigmas <= 3.0 &&
            rep["censor_rate"].get<double>() <= kMaxCensorRate;
        all_pass = all_pass && pass;
        json r;
        r["t"] = grid[g];
        r["estimate"] = est;
        r["stderr"] = se;
        r["target"] = target;
        r["sigmas"] = sigmas;
        r["pass"] = pass;
        rows.push_back(r);
        std::printf("t=%-8g E[doob]=%.6g  stderr=%.3g  target=%.6g  "
                    "sigma=%.2f  %s\n",
                    grid[g], est, se, target, sigmas,
                    pass ? "ok" : "FAIL");
    }
    rep["rows"] = rows;
    rep["pass"] = all_pass;
    if (!out.empty()) {
        if (want_csv) {
            write_text(out, csv);
        } else {
            write_text(out, rep.dump(2) + "\n");
        }
        std::printf("wrote %s\n", out.c_str());
    }
    return all_pass ? 0 : 1;
}

int cmd_verify(const std::string& suite_name, std::uint64_t seed,
               const std::string& out) {
    const auto print_row = [](const MCRow& r) {
        if (r.det_tol > 0.0) {
            std::printf("  [%s] %-70s est=%.10g target=%.10g tol=%.3g\n",
                        r.pass ? "ok  " : "FAIL", r.name.c_str(), r.estimate,
                        r.target, r.det_tol);
        } else {
            std::printf("  [%s] %-70s est=%.6g target=%.6g sigma=%.2f "
                        "censor=%.2f%%\n",
                        r.pass ? "ok  " : "FAIL", r.name.c_str(), r.estimate,
                        r.target, r.sigmas, 100.0 * r.censor_rate);
        }
        std::fflush(stdout);
    };
    const VerificationSuite suite(seed, print_row);
    bool all_pass = true;
    json checks = json::array();
    for (int id : VerificationSuite::suite_checks(suite_name)) {
        std::fprintf(stderr, "running check %d ...\n", id);
        std::printf("check %d:\n", id);
        const auto rep = suite.run_check(id);
        std::printf("check %d %s  %s (%.1f s)\n", id,
                    rep.pass ? "PASS" : "FAIL", rep.title.c_str(),
                    rep.runtime_s);
        all_pass = all_pass && rep.pass;
        json jc;
        jc["id"] = rep.id;
        jc["title"] = rep.title;
        jc["pass"] = rep.pass;
        jc["runtime_s"] = rep.runtime_s;
        json rows = json::array();
        for (const auto& r : rep.rows) rows.push_back(row_to_json(r));
        jc["rows"] = rows;
        checks.push_back(jc);
    }
    json rep;
    rep["suite"] = suite_name;
    rep["seed"] = seed;
    rep["pass"] = all_pass;
    rep["checks"] = checks;
    if (!out.empty()) {
        write_text(out, rep.dump(2) + "\n");
        std::printf("wrote %s\n", out.c_str());
    }
    std::printf("%s\n", all_pass ? "suite passed" : "suite FAILED");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "potential theory and local-time penalization for one-dimensional "
        "Levy processes"};
    app.require_subcommand(1);

    std::string model = "bm";
    std::string xs = "-3:3:0.5";
    std::string out;
    std::string weight_spec = "exp:beta=1";
    std::string clock_kind = "exp";
    std::string suite_name = "all";
    double gamma = 0.0, x = 0.0, a = 1.0, b = -1.0, u = 1.0, q = 1.0;
    double x0 = 0.0, l0 = 0.0, level_lt = 0.0;
    double dt_min = 0.0, t_max = 1e9;
    std::optional<double> c;
    std::size_t paths = 1000;
    std::uint64_t seed = default_seed();
    std::vector<double> grid;

    auto* t = app.add_subcommand(
        "h-table", "tabulate the renormalized resolvent h over a grid (CSV)");
    t->add_option("--model", model, "model preset or inline spec");
    t->add_option("--xs", xs, "grid lo:hi:step")->required();
    t->add_option("--gamma", gamma, "tilt in [-1,1] for the h_tilted column");
    t->add_option("--out", out, "output CSV path (default stdout)");

    auto* hp = app.add_subcommand(
        "hitprob", "probability of hitting a before b (before c), from x");
    hp->add_option("--model", model, "model preset or inline spec");
    hp->add_option("--x", x, "starting point")->required();
    hp->add_option("--a", a, "target level")->required();
    hp->add_option("--b", b, "competing level")->required();
    hp->add_option("--c", c, "second competing level (three-way race)");

    auto* ex = app.add_subcommand(
        "excursion", "excursion rates to a level, per unit local time");
    ex->add_option("--model", model, "model preset or inline spec");
    ex->add_option("--a", a, "target level")->required();

    auto* pe = app.add_subcommand(
        "penalize", "random-clock penalization martingale values");
    pe->add_option("--model", model, "model preset or inline spec");
    pe->add_option("--clock", clock_kind, "exp | hit | twopoint | invlt");
    pe->add_option("--q", q, "exponential clock rate");
    pe->add_option("--a", a, "clock level a");
    pe->add_option("--b", b, "second level (twopoint)");
    pe->add_option("--u", u, "local-time depth (invlt)");
    pe->add_option("--f", weight_spec,
                   "weight: exp[:beta=B] | indicator0 | step:<breaks>:<values>");
    pe->add_option("--x0", x0, "state position");
    pe->add_option("--l", l0, "state local time at zero");
    pe->add_option("--level-lt", level_lt,
                   "state local time at the clock level (invlt)");

    auto* si = app.add_subcommand(
        "simulate",
        "Monte Carlo check that the clock Doob closure has constant mean");
    si->add_option("--model", model, "model preset or inline spec");
    si->add_option("--clock", clock_kind, "exp | hit | twopoint | invlt");
    si->add_option("--q", q, "exponential clock rate");
    si->add_option("--a", a, "clock level a");
    si->add_option("--b", b, "second level (twopoint)");
    si->add_option("--u", u, "local-time depth (invlt)");
    si->add_option("--f", weight_spec,
                   "weight: exp[:beta=B] | indicator0 | step:<breaks>:<values>");
    si->add_option("--paths", paths, "number of paths");
    si->add_option("--dt", dt_min, "minimum step size (0 = default)");
    si->add_option("--tmax", t_max, "censoring horizon");
    si->add_option("--grid", grid, "evaluation times")->delimiter(',');
    si->add_option("--seed", seed, "RNG seed (or env LEVYZERO_SEED)");
    si->add_option("--out", out, "paths.csv (path dump) or report.json");

    auto* ve = app.add_subcommand("verify", "run a self-verification suite");
    ve->add_option("--suite", suite_name,
                   "all | h | hitting | martingale | clocks | transient");
    ve->add_option("--seed", seed, "RNG seed (or env LEVYZERO_SEED)");
    ve->add_option("--out", out, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (t->parsed()) return cmd_h_table(model, xs, gamma, out);
        if (hp->parsed()) return cmd_hitprob(model, x, a, b, c);
        if (ex->parsed()) return cmd_excursion(model, a);
        if (pe->parsed())
            return cmd_penalize(model, clock_kind, q, a, b, u, weight_spec,
                                x0, l0, level_lt);
        if (si->parsed())
            return cmd_simulate(model, clock_kind, q, a, b, u, weight_spec,
                                paths, dt_min, t_max, grid, seed, out);
        if (ve->parsed()) return cmd_verify(suite_name, seed, out);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
