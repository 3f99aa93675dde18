// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdc/cli.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdc/aggregate.h"
#include "qdc/ensemble.h"
#include "qdc/scaling.h"
#include "qdc/verify.h"

using namespace qdc;

namespace {

struct CircuitArgs {
    std::vector<std::size_t> Ls{16};
    std::vector<double> ps{0.5};
    std::size_t T = 0;
    std::vector<std::size_t> samples{1};
    std::uint64_t seed = 0;
    std::string init = "product";
    std::string observables;
    std::size_t record_every = 0;
    std::string out;
    std::size_t workers = 1;
    double cnot_prob = 0.9;
    bool break_ab_symmetry = false;
    bool timing = false;
    std::string config_path;
};

template <typename T>
std::vector<T> json_list(const nlohmann::json &value) {
    if (value.is_array()) {
        return value.get<std::vector<T>>();
    }
    return {value.get<T>()};
}

void add_circuit_options(CLI::App *sub, CircuitArgs &a) {
    sub->add_option("--L", a.Ls, "Chain lengths in sites (repeatable or comma separated)")->delimiter(',');
    sub->add_option("--p", a.ps, "Transduction probabilities (repeatable or comma separated)")->delimiter(',');
    sub->add_option("--T", a.T, "Layers per trajectory (default 4 L)");
    sub->add_option("--samples", a.samples, "Trajectories per (L, p); one value or one per L")->delimiter(',');
    sub->add_option("--seed", a.seed, "Master seed");
    sub->add_option("--init", a.init, "Initial state")->check(CLI::IsMember({"product", "mixed", "bell"}));
    sub->add_option("--workers", a.workers, "Worker threads (0 = all cores)");
    sub->add_option("--cnot-prob", a.cnot_prob, "Probability of the entangling layer in each two-qubit Clifford");
    sub->add_option("--config", a.config_path, "JSON file with defaults for any of these flags");
}

// Flags given on the command line win over the config file.
void apply_config_file(CLI::App *sub, CircuitArgs &a) {
    if (a.config_path.empty()) {
        return;
    }
    std::ifstream in(a.config_path);
    if (!in) {
        throw std::runtime_error("cannot open config '" + a.config_path + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument("config '" + a.config_path + "': " + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config '" + a.config_path + "' must hold a JSON object");
    }
    std::map<std::string, std::pair<std::string, std::function<void(const nlohmann::json &)>>> fields{
        {"L", {"--L", [&](const nlohmann::json &v) { a.Ls = json_list<std::size_t>(v); }}},
        {"p", {"--p", [&](const nlohmann::json &v) { a.ps = json_list<double>(v); }}},
        {"T", {"--T", [&](const nlohmann::json &v) { a.T = v.get<std::size_t>(); }}},
        {"samples", {"--samples", [&](const nlohmann::json &v) { a.samples = json_list<std::size_t>(v); }}},
        {"seed", {"--seed", [&](const nlohmann::json &v) { a.seed = v.get<std::uint64_t>(); }}},
        {"init", {"--init", [&](const nlohmann::json &v) { a.init = v.get<std::string>(); }}},
        {"observables", {"--observables", [&](const nlohmann::json &v) { a.observables = v.get<std::string>(); }}},
        {"record_every", {"--record-every", [&](const nlohmann::json &v) { a.record_every = v.get<std::size_t>(); }}},
        {"out", {"--out", [&](const nlohmann::json &v) { a.out = v.get<std::string>(); }}},
        {"workers", {"--workers", [&](const nlohmann::json &v) { a.workers = v.get<std::size_t>(); }}},
        {"cnot_prob", {"--cnot-prob", [&](const nlohmann::json &v) { a.cnot_prob = v.get<double>(); }}},
        {"break_ab_symmetry",
         {"--break-ab-symmetry", [&](const nlohmann::json &v) { a.break_ab_symmetry = v.get<bool>(); }}},
        {"timing", {"--timing", [&](const nlohmann::json &v) { a.timing = v.get<bool>(); }}},
    };
    for (const auto &[key, value] : j.items()) {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw std::invalid_argument("config '" + a.config_path + "': unknown key '" + key + "'");
        }
        const CLI::Option *opt = sub->get_option_no_throw(it->second.first);
        if (opt != nullptr && opt->count() > 0) {
            continue;
        }
        try {
            it->second.second(value);
        } catch (const nlohmann::json::exception &e) {
            throw std::invalid_argument("config '" + a.config_path + "': key '" + key + "': " + e.what());
        }
    }
    a.init = std::string(initial_state_name(parse_initial_state(a.init)));
}

std::string default_observables(const std::vector<std::size_t> &Ls, InitialStateKind kind) {
    std::string names = "cond_entropy_quarter";
    bool quarters = true;
    for (std::size_t L : Ls) {
        quarters &= L % 4 == 0;
    }
    if (quarters) {
        names += ",I3";
    }
    if (kind != InitialStateKind::PureProduct) {
        names += ",coherent_info";
    }
    return names;
}

EnsembleSpec ensemble_spec(const CircuitArgs &a) {
    EnsembleSpec spec;
    spec.Ls = a.Ls;
    spec.ps = a.ps;
    spec.samples = a.samples;
    spec.output_path = a.out;
    spec.workers = a.workers;
    spec.record_timing = a.timing;
    spec.base.T = a.T;
    spec.base.cnot_prob = a.cnot_prob;
    spec.base.initial_state = parse_initial_state(a.init);
    spec.base.master_seed = a.seed;
    spec.base.record_every = a.record_every;
    spec.base.break_ab_symmetry = a.break_ab_symmetry;
    spec.base.observables = ObservableSet::parse(
        a.observables.empty() ? default_observables(a.Ls, spec.base.initial_state) : a.observables);
    spec.validate();
    return spec;
}

void with_output(const std::string &path, std::ostream &fallback, const std::function<void(std::ostream &)> &fn) {
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    fn(file);
    file.close();
    if (!file) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

int run_simulate(const CircuitArgs &a, std::ostream &out, std::ostream &err) {
    EnsembleSpec spec = ensemble_spec(a);
    if (spec.output_path.empty() || spec.output_path == "-") {
        run_ensemble(spec, out, OutputFormat::JsonLines);
        return 0;
    }
    EnsembleSummary summary = run_ensemble(spec);
    err << "wrote " << summary.records << " records from " << summary.trajectories << " trajectories to "
        << spec.output_path << "\n";
    return 0;
}

std::string csv_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

int run_profile(const CircuitArgs &a, const std::vector<std::size_t> &xs, std::ostream &out) {
    CircuitArgs with_profile = a;
    std::string names;
    for (std::size_t x : xs) {
        names += (names.empty() ? "" : ",") + profile_name(x);
    }
    with_profile.observables = names.empty() ? "profile" : names;
    EnsembleSpec spec = ensemble_spec(with_profile);
    Aggregator agg;
    run_tasks_ordered(expand_tasks(spec), spec.workers, [&](const TrajectoryRecord &r) { agg.add(r); });
    with_output(a.out, out, [&](std::ostream &o) {
        o << "L,p,layer,x,mean,std_error,count\n";
        for (const auto &pt : agg.points()) {
            std::string x = pt.observable.substr(pt.observable.find(':') + 1);
            o << pt.L << "," << csv_number(pt.p) << "," << pt.layer << "," << x << "," << csv_number(pt.mean) << ","
              << csv_number(pt.std_error) << "," << pt.count << "\n";
        }
    });
    return 0;
}

struct VerifyArgs {
    VerifyOptions options;
    std::vector<std::string> inits;
    std::string out;
    bool timing = false;
};

int run_verify(VerifyArgs &a, std::ostream &out, std::ostream &err) {
    if (!a.inits.empty()) {
        a.options.kinds.clear();
        for (const auto &name : a.inits) {
            a.options.kinds.push_back(parse_initial_state(name));
        }
    }
    VerifyReport report = run_verification(a.options);
    with_output(a.out, out, [&](std::ostream &o) { o << report.to_json(a.timing) << "\n"; });
    if (!report.passed()) {
        err << "verification failed\n";
        return 1;
    }
    return 0;
}

int run_aggregate(const std::vector<std::string> &inputs, const std::string &path, std::ostream &out) {
    auto points = aggregate_files(inputs);
    with_output(path, out, [&](std::ostream &o) { write_aggregate_csv(o, points); });
    return 0;
}

int run_crossing(
    const std::vector<std::string> &inputs, const std::string &observable, std::size_t L1, std::size_t L2,
    std::ostream &out) {
    bool one_pair = L1 != 0 || L2 != 0;
    if (one_pair && (L1 == 0 || L2 == 0 || L1 >= L2)) {
        throw std::invalid_argument("--L1 and --L2 must be given together with L1 < L2");
    }
    auto points = load_points(inputs);
    std::vector<CrossingEstimate> estimates;
    if (one_pair) {
        estimates.push_back({L1, L2, estimate_crossing(points, L1, L2, observable)});
    } else {
        estimates = pairwise_crossings(points, observable);
    }
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto &e : estimates) {
        list.push_back({{"L1", e.L1}, {"L2", e.L2}, {"p_star", e.p_star}});
    }
    out << list.dump(2) << "\n";
    return 0;
}

struct CollapseArgs {
    std::vector<std::string> inputs;
    bool synthetic = false;
    CollapseOptions options;
    std::vector<double> p_window;
    std::vector<double> nu_window;
    double fixed_nu = 0;
    bool trace = false;
    std::string out;
};

int run_collapse(CollapseArgs &a, std::ostream &out) {
    if (a.synthetic == !a.inputs.empty()) {
        throw std::invalid_argument("collapse: give input files or --synthetic, not both or neither");
    }
    if (!a.p_window.empty()) {
        a.options.p_window = std::pair{a.p_window.at(0), a.p_window.at(1)};
    }
    if (!a.nu_window.empty()) {
        a.options.nu_window = {a.nu_window.at(0), a.nu_window.at(1)};
    }
    if (a.fixed_nu > 0) {
        a.options.fixed_nu = a.fixed_nu;
    }
    std::vector<AggregatePoint> points;
    if (a.synthetic) {
        std::vector<std::size_t> Ls{16, 32, 64};
        auto ps = p_grid(0.40, 0.62, 0.02);
        points = synthetic_collapse_points(Ls, ps, 0.514, 1.16, 0.01, a.options.bootstrap_seed, a.options.observable);
    } else {
        points = load_points(a.inputs);
    }
    CollapseFit fit = fit_collapse(points, a.options);
    nlohmann::ordered_json j;
    j["p_c"] = fit.p_c;
    j["nu"] = fit.nu;
    j["cost"] = fit.cost;
    j["terms"] = fit.terms;
    j["fixed_nu"] = a.options.fixed_nu.has_value();
    if (fit.bootstrap) {
        const auto &b = *fit.bootstrap;
        j["bootstrap"] = {
            {"samples", b.samples}, {"p_c_std", b.p_c_std}, {"p_c_lo", b.p_c_lo}, {"p_c_hi", b.p_c_hi},
            {"nu_std", b.nu_std},   {"nu_lo", b.nu_lo},     {"nu_hi", b.nu_hi}};
    }
    if (a.trace) {
        nlohmann::ordered_json trace = nlohmann::ordered_json::array();
        for (const auto &t : fit.trace) {
            trace.push_back({t.p_c, t.nu, t.cost});
        }
        j["trace"] = trace;
    }
    with_output(a.out, out, [&](std::ostream &o) { o << j.dump(2) << "\n"; });
    return 0;
}

}  // namespace

int qdc::cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stabilizer simulation of noisy transduction circuits"};
    app.name("qdc");
    app.require_subcommand(1);

    CircuitArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Run a trajectory ensemble and write raw records");
    add_circuit_options(simulate, sim);
    simulate->add_option("--observables", sim.observables, "Comma-separated observable names");
    simulate->add_option("--record-every", sim.record_every, "Snapshot stride in layers (0 = final layer only)");
    simulate->add_option("--out", sim.out, "Output path; .csv selects CSV, - or empty writes JSON lines to stdout");
    simulate->add_flag("--break-ab-symmetry", sim.break_ab_symmetry, "Negative control: different a and b gates");
    simulate->add_flag("--timing", sim.timing, "Record wall time per snapshot");

    VerifyArgs ver;
    auto *verify = app.add_subcommand("verify", "Check the tracker against the full oracle");
    verify->add_option("--L", ver.options.Ls, "Chain lengths")->delimiter(',');
    verify->add_option("--p-grid", ver.options.ps, "Transduction probabilities")->delimiter(',');
    verify->add_option("--seeds", ver.options.seeds, "Seeds per (init, L, p)");
    verify->add_option("--cap", ver.options.qubit_cap, "Oracle qubit cap");
    verify->add_option("--T", ver.options.T, "Layers per trajectory (default 4 L)");
    verify->add_option("--trials", ver.options.region_trials, "Random regions per snapshot");
    verify->add_option("--init", ver.inits, "Initial states to check (default all)")
        ->delimiter(',')
        ->check(CLI::IsMember({"product", "mixed", "bell"}));
    verify->add_option("--seed", ver.options.master_seed, "Master seed");
    verify->add_option("--negative-control-seeds", ver.options.negative_control_seeds, "Seeds of the broken circuit");
    verify->add_option("--out", ver.out, "Report path (default stdout)");
    verify->add_flag("--timing", ver.timing, "Include the elapsed time in the report");

    std::vector<std::string> agg_inputs;
    std::string agg_out;
    auto *aggregate = app.add_subcommand("aggregate", "Means and standard errors of raw records as CSV");
    aggregate->add_option("inputs", agg_inputs, "Raw JSON-lines or CSV files")->required();
    aggregate->add_option("--out", agg_out, "Output CSV (default stdout)");

    std::vector<std::string> cross_inputs;
    std::string cross_observable = "I3";
    std::size_t L1 = 0;
    std::size_t L2 = 0;
    auto *crossing = app.add_subcommand("crossing", "Crossing points of an observable between sizes");
    crossing->add_option("inputs", cross_inputs, "Raw or aggregate files")->required();
    crossing->add_option("--observable", cross_observable, "Observable name");
    crossing->add_option("--L1", L1, "Smaller size");
    crossing->add_option("--L2", L2, "Larger size");

    CollapseArgs col;
    auto *collapse = app.add_subcommand("collapse", "Finite-size scaling collapse fit of (p_c, nu)");
    collapse->add_option("inputs", col.inputs, "Raw or aggregate files");
    collapse->add_flag("--synthetic", col.synthetic, "Fit the built-in exact-scaling fixture instead of files");
    collapse->add_option("--observable", col.options.observable, "Observable name");
    collapse->add_option("--p-window", col.p_window, "Data and p_c window: LO,HI")->delimiter(',')->expected(2);
    collapse->add_option("--nu-window", col.nu_window, "nu window: LO,HI")->delimiter(',')->expected(2);
    collapse->add_option("--grid", col.options.grid, "Grid points per axis");
    collapse->add_option("--fixed-nu", col.fixed_nu, "Fit p_c only, at this nu");
    collapse->add_option("--min-overlap", col.options.min_overlap_fraction, "Minimum fraction of points compared");
    collapse->add_option("--bootstrap", col.options.bootstrap, "Parametric bootstrap refits");
    collapse->add_option("--seed", col.options.bootstrap_seed, "Bootstrap and fixture seed");
    collapse->add_flag("--trace", col.trace, "Include the search trace");
    collapse->add_option("--out", col.out, "Output JSON (default stdout)");

    CircuitArgs prof;
    std::vector<std::size_t> xs;
    auto *profile = app.add_subcommand("profile", "Mean S(P_x|A) against x as CSV");
    add_circuit_options(profile, prof);
    profile->add_option("--x", xs, "Region sizes in sites (default 0..L)")->delimiter(',');
    profile->add_option("--record-every", prof.record_every, "Snapshot stride in layers (0 = final layer only)");
    profile->add_option("--out", prof.out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            apply_config_file(simulate, sim);
            return run_simulate(sim, out, err);
        }
        if (profile->parsed()) {
            apply_config_file(profile, prof);
            return run_profile(prof, xs, out);
        }
        if (verify->parsed()) {
            return run_verify(ver, out, err);
        }
        if (aggregate->parsed()) {
            return run_aggregate(agg_inputs, agg_out, out);
        }
        if (crossing->parsed()) {
            return run_crossing(cross_inputs, cross_observable, L1, L2, out);
        }
        if (collapse->parsed()) {
            return run_collapse(col, out);
        }
    } catch (const std::logic_error &e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
