#pragma once

// Command-line front end.  run_cli() is callable in-process; the executable in
// tools/ is a thin wrapper around it.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glauber/glauber.hpp"

namespace glauber::cli {

using json = nlohmann::ordered_json;

enum exit_code : int { ok = 0, refused = 2, size_cap = 3, bad_input = 4 };

inline constexpr const char* csv_schema = "# schema glauber-csv v1";

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    std::string out;
    std::string format = "json";
    std::optional<std::size_t> cap;
};

/// A command's result: a JSON document and, for row-shaped data, a table that
/// is emitted instead when --format csv is chosen.
struct Output {
    json doc = json::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::string csv_text(const Output& o) {
    std::ostringstream os;
    os << csv_schema << '\n';
    for (std::size_t i = 0; i < o.header.size(); ++i) os << (i ? "," : "") << o.header[i];
    os << '\n';
    for (const auto& r : o.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
    return os.str();
}

inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return format_real(x);
}

/// JSON number, or null when not finite.
inline json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline void emit(const GlobalOptions& g, const Output& o, std::ostream& out, std::ostream& err) {
    const bool csv = g.format == "csv" && !o.header.empty();
    const std::string main = csv ? csv_text(o) : o.doc.dump(2) + "\n";
    if (g.out.empty()) {
        out << main;
        if (csv) err << o.doc.dump(2) << '\n';
        return;
    }
    write_file_atomically(g.out, main);
    if (csv) write_file_atomically(g.out + ".summary.json", o.doc.dump(2) + "\n");
}

inline std::uint64_t require_seed(const GlobalOptions& g, const std::string& what) {
    if (!g.seed) throw invalid_input("--seed is required for " + what);
    return *g.seed;
}

inline time_mode parse_mode(const std::string& m) {
    if (m == "discrete") return time_mode::discrete;
    if (m == "continuous") return time_mode::continuous;
    throw invalid_input("mode must be 'discrete' or 'continuous'");
}

// --- gen -----------------------------------------------------------------------

struct GenArgs {
    family_params fam;
    double beta = 0.0;
    double field = 0.0;
    std::string in;
};

inline int cmd_gen(const GlobalOptions& g, const GenArgs& a, std::ostream& out, std::ostream& err) {
    IsingInstance inst;
    if (a.fam.family == "file") {
        if (a.in.empty()) throw invalid_input("family 'file' needs --in");
        inst = load_instance(a.in);
    } else {
        const std::uint64_t seed = is_random_family(a.fam.family) ? require_seed(g, "random graph families") : 0;
        const Graph graph = make_family_graph(a.fam, seed, 0);
        std::vector<Field> fields(graph.num_vertices(), Field::finite(a.field));
        inst = IsingInstance::uniform(graph, a.beta).with_fields(fields);
    }
    std::ostringstream text;
    write_instance(text, inst);
    json summary;
    summary["n"] = inst.num_vertices();
    summary["m"] = inst.graph().num_edges();
    summary["max_degree"] = inst.graph().max_degree();
    summary["beta_max"] = inst.beta_max();
    summary["free_vertices"] = inst.free_vertices().size();
    summary["connected"] = is_connected(inst.graph());
    if (g.out.empty()) {
        out << text.str();
        err << summary.dump() << '\n';
    } else {
        write_file_atomically(g.out, text.str());
        out << summary.dump() << '\n';
    }
    return ok;
}

// --- exact ---------------------------------------------------------------------

inline Output cmd_exact(const GlobalOptions& g, const std::string& in) {
    const auto inst = load_instance(in);
    exact_caps caps;
    if (g.cap) {
        caps.matrix = *g.cap;
        caps.enumeration = std::max(caps.enumeration, *g.cap);
    }
    const auto d = enumerate_gibbs(inst, caps.enumeration);
    const auto t = transition_matrix(inst, caps.matrix);
    Output o;
    o.doc["n"] = inst.num_vertices();
    o.doc["free_vertices"] = inst.free_vertices().size();
    o.doc["log_Z"] = d.log_Z;
    json marg = json::array();
    o.header = {"vertex", "p_plus"};
    std::size_t next_free = 0;
    for (std::size_t v = 0; v < inst.num_vertices(); ++v) {
        double p;
        if (inst.is_clamped(static_cast<vertex>(v))) {
            p = inst.field(static_cast<vertex>(v)).clamp_sign() > 0 ? 1.0 : 0.0;
        } else {
            p = d.marginal_plus(next_free++);
        }
        marg.push_back(p);
        o.rows.push_back({std::to_string(v), num(p)});
    }
    o.doc["marginals"] = marg;
    o.doc["gap"] = jnum(t.gap);
    o.doc["relaxation_time"] = t.relaxation_time;
    o.doc["mixing_time"] = exact_mixing_time(t, d);
    o.doc["continuous_gap"] = jnum(t.continuous_gap());
    o.doc["continuous_mixing_time"] = exact_continuous_mixing_time(t, d);
    return o;
}

// --- saw -----------------------------------------------------------------------

struct SawArgs {
    std::string in;
    vertex v = 0;
    std::size_t R = 1;
    bool exact = false;
};

inline Output cmd_saw(const GlobalOptions& g, const SawArgs& a) {
    const auto inst = load_instance(a.in);
    if (a.v >= inst.num_vertices()) throw invalid_input("--v out of range");
    const std::size_t node_cap = g.cap.value_or(default_saw_node_cap);
    const auto cert = spatial_bound_a_u(inst, a.v, a.R, node_cap);
    Output o;
    o.doc["v"] = a.v;
    o.doc["R"] = a.R;
    o.doc["marginal"] = saw_marginal(inst, a.v, std::vector<vertex>{}, std::vector<spin>{}, node_cap);
    o.doc["tree_nodes"] = cert.tree_nodes;
    json rows = json::array();
    o.header = {"u", "a_u", "copies"};
    if (a.exact) o.header.push_back("exact_a_u");
    for (std::size_t i = 0; i < cert.boundary.size(); ++i) {
        json r;
        r["u"] = cert.boundary[i];
        r["a_u"] = cert.a_u[i];
        r["copies"] = cert.copies[i];
        std::vector<std::string> row{std::to_string(cert.boundary[i]), num(cert.a_u[i]), std::to_string(cert.copies[i])};
        if (a.exact) {
            const double e = exact_a_u(inst, a.v, a.R, cert.boundary[i]);
            r["exact_a_u"] = e;
            row.push_back(num(e));
        }
        rows.push_back(r);
        o.rows.push_back(std::move(row));
    }
    o.doc["boundary"] = rows;
    o.doc["sum_a_u"] = cert.total;
    o.doc["pass"] = cert.pass;
    return o;
}

// --- couple --------------------------------------------------------------------

struct CoupleArgs {
    std::string in;
    std::string mode = "discrete";
    double horizon = 0.0;
    std::size_t replicas = 1;
    std::size_t checkpoints = 0;
    std::optional<vertex> censor_center;
    std::size_t censor_radius = 1;
    bool track_middle = false;
};

inline Output cmd_couple(const GlobalOptions& g, const CoupleArgs& a) {
    const std::uint64_t seed = require_seed(g, "couple");
    const auto inst = load_instance(a.in);
    if (!(a.horizon > 0)) throw invalid_input("--horizon must be positive");
    if (a.replicas == 0) throw invalid_input("--replicas must be positive");
    UpdateSchedule sched;
    sched.mode = parse_mode(a.mode);
    sched.horizon = a.horizon;
    if (a.censor_center) {
        if (*a.censor_center >= inst.num_vertices()) throw invalid_input("--censor-center out of range");
        const Ball b = ball(inst, *a.censor_center, a.censor_radius);
        sched.windows.push_back({0.0, b.interior});
    }
    coupling_options opt;
    opt.track_middle = a.track_middle;
    if (a.checkpoints > 0)
        opt.checkpoints = geometric_grid(1.0, a.horizon, a.checkpoints, sched.mode == time_mode::discrete);
    std::vector<CouplingTrace> traces(a.replicas);
    parallel_for(a.replicas, g.threads, [&](std::size_t r) {
        traces[r] = grand_coupling_run(inst, sched, seed, static_cast<std::uint32_t>(r), opt);
    });
    Output o;
    o.header = {"seed", "replica", "n", "beta", "d", "mode", "coupling_time", "censored_flag"};
    std::vector<double> observed;
    std::size_t censored = 0, violations = 0;
    for (std::size_t r = 0; r < traces.size(); ++r) {
        const auto& tr = traces[r];
        o.rows.push_back({std::to_string(seed), std::to_string(r), std::to_string(inst.num_vertices()),
                          num(inst.beta_max()), std::to_string(inst.graph().max_degree()), a.mode,
                          tr.censored() ? "" : num(*tr.coupling_time), tr.censored() ? "1" : "0"});
        if (tr.censored()) ++censored;
        else observed.push_back(*tr.coupling_time);
        violations += tr.order_violations;
    }
    const auto med = censored_median(observed, censored);
    const auto ci = median_interval(observed, censored);
    o.doc["seed"] = seed;
    o.doc["n"] = inst.num_vertices();
    o.doc["mode"] = a.mode;
    o.doc["horizon"] = a.horizon;
    o.doc["replicas"] = a.replicas;
    o.doc["censored"] = censored;
    o.doc["censored_fraction"] = static_cast<double>(censored) / static_cast<double>(a.replicas);
    o.doc["median_coupling_time"] = med ? json(*med) : json(nullptr);
    o.doc["median_ci"] = {jnum(ci.lo), jnum(ci.hi)};
    o.doc["order_violations"] = violations;
    if (!opt.checkpoints.empty()) {
        json curve = json::array();
        for (std::size_t c = 0; c < opt.checkpoints.size(); ++c) {
            double total = 0;
            for (const auto& tr : traces) total += static_cast<double>(tr.disagreements[c]);
            curve.push_back({{"time", opt.checkpoints[c]}, {"mean_disagreements", total / static_cast<double>(a.replicas)}});
        }
        o.doc["checkpoints"] = curve;
    }
    json rows = json::array();
    for (std::size_t r = 0; r < traces.size(); ++r)
        rows.push_back({{"replica", r},
                        {"coupling_time", traces[r].censored() ? json(nullptr) : json(*traces[r].coupling_time)},
                        {"censored", traces[r].censored()}});
    o.doc["rows"] = rows;
    return o;
}

// --- scan ----------------------------------------------------------------------

struct ScanArgs {
    family_params fam;
    std::vector<std::size_t> ns;
    std::vector<double> betas;
    std::vector<double> tanh_ratios; // (d-1) tanh(beta); alternative to betas
    double field = 0.0;
    std::size_t replicas = 1;
    std::string mode = "discrete";
    double horizon = 0.0;
    double horizon_factor = 0.0;
    bool fixed_graph = false;
};

inline ScanSpec scan_spec(const GlobalOptions& g, const ScanArgs& a) {
    ScanSpec s;
    s.graph = a.fam;
    s.ns = a.ns;
    s.betas = a.betas;
    for (double r : a.tanh_ratios) {
        if (!(a.fam.d > 1)) throw invalid_input("--tanh-ratio needs --d > 1");
        const double t = r / (a.fam.d - 1.0);
        if (!(t >= 0 && t < 1)) throw invalid_input("--tanh-ratio gives tanh(beta) outside [0,1)");
        s.betas.push_back(std::atanh(t));
    }
    s.field = a.field;
    s.replicas = a.replicas;
    s.mode = parse_mode(a.mode);
    s.horizon = a.horizon;
    s.horizon_factor = a.horizon_factor;
    if (!(s.horizon > 0) && !(s.horizon_factor > 0)) throw invalid_input("scan needs --horizon or --horizon-factor > 0");
    s.fresh_graph = !a.fixed_graph;
    s.seed = require_seed(g, "scan");
    s.threads = g.threads;
    return s;
}

inline Output scan_output(const ScanSpec& s, const ScanResult& r) {
    Output o;
    const std::string mode = to_string(s.mode);
    o.header = {"family", "seed", "replica", "n", "beta", "d", "mode", "coupling_time", "censored_flag"};
    for (const auto& row : r.rows)
        o.rows.push_back({s.graph.family, std::to_string(s.seed), std::to_string(row.replica), std::to_string(row.n),
                          num(row.beta), num(s.graph.d), mode, row.censored ? "" : num(row.coupling_time),
                          row.censored ? "1" : "0"});
    o.doc["family"] = s.graph.family;
    o.doc["seed"] = s.seed;
    o.doc["d"] = s.graph.d;
    o.doc["mode"] = mode;
    o.doc["replicas"] = s.replicas;
    json pts = json::array();
    for (const auto& p : r.points) {
        json j;
        j["n"] = p.n;
        j["beta"] = p.beta;
        j["horizon"] = p.horizon;
        j["replicas"] = p.replicas;
        j["censored"] = p.censored;
        j["censored_fraction"] = p.censored_fraction();
        j["median_coupling_time"] = p.median ? json(*p.median) : json(nullptr);
        j["median_ci"] = {jnum(p.median_ci.lo), jnum(p.median_ci.hi)};
        j["ratio_n_log_n"] = p.ratio ? json(*p.ratio) : json(nullptr);
        pts.push_back(j);
    }
    o.doc["points"] = pts;
    json var = json::array();
    for (double b : s.betas) {
        const auto v = ratio_variation(r, b);
        var.push_back({{"beta", b}, {"ratio_variation", v ? json(*v) : json(nullptr)}});
    }
    o.doc["ratio_variation"] = var;
    return o;
}

inline Output cmd_scan(const GlobalOptions& g, const ScanArgs& a) {
    const auto spec = scan_spec(g, a);
    return scan_output(spec, run_scan(spec));
}

// --- certify -------------------------------------------------------------------

struct CertifyArgs {
    std::string in;
    std::string R = "auto";
    std::size_t max_R = 6;
    std::string lm = "exact";
    bool theorem1 = false;
    std::size_t boundary_cap = 12;
};

inline Output cmd_certify(const GlobalOptions& g, const CertifyArgs& a, bool& certified) {
    const auto inst = load_instance(a.in);
    ConditionReport rep;
    Output o;
    std::string reason;
    if (a.theorem1) {
        const double d = static_cast<double>(std::max<std::size_t>(2, inst.graph().max_degree()));
        rep = theorem1_conditions(inst, d, inst.beta_max(), g.threads);
    } else {
        certify_options opt;
        if (a.R == "auto") {
            const auto r = auto_radius(inst, a.max_R);
            if (!r) reason = "no radius up to " + std::to_string(a.max_R) + " satisfies the spatial mixing condition";
            opt.R = r.value_or(a.max_R);
        } else {
            try {
                opt.R = static_cast<std::size_t>(std::stoul(a.R));
            } catch (const std::exception&) {
                throw invalid_input("--R must be 'auto' or a positive integer");
            }
        }
        if (a.lm == "exact") opt.lm = lm_mode::exact;
        else if (a.lm == "extremal") opt.lm = lm_mode::exact_extremal;
        else if (a.lm == "cutwidth") opt.lm = lm_mode::cutwidth_bound;
        else throw invalid_input("--lm must be exact, extremal or cutwidth");
        if (g.cap) opt.interior_cap = *g.cap;
        opt.boundary_cap = a.boundary_cap;
        opt.threads = g.threads;
        rep = verify_conditions(inst, opt);
    }
    o.doc["R"] = rep.R;
    o.doc["X"] = rep.X;
    o.doc["T"] = jnum(std::exp(rep.log_T));
    o.doc["log_T"] = rep.log_T;
    o.doc["lm_mode"] = to_string(rep.mode);
    o.doc["heuristic"] = rep.heuristic;
    json pv = json::array();
    o.header = {"v", "volume", "tree_excess", "vol", "lm", "sm", "sum_a_u", "log_lm_time"};
    for (const auto& c : rep.per_vertex) {
        pv.push_back({{"v", c.v},
                      {"vol", c.vol},
                      {"lm", c.lm},
                      {"sm", c.sm},
                      {"sum_a_u", c.sum_a_u},
                      {"volume", c.volume},
                      {"tree_excess", c.tree_excess},
                      {"log_lm_time", jnum(c.log_lm_time)}});
        o.rows.push_back({std::to_string(c.v), std::to_string(c.volume), std::to_string(c.tree_excess),
                          c.vol ? "1" : "0", c.lm ? "1" : "0", c.sm ? "1" : "0", num(c.sum_a_u), num(c.log_lm_time)});
    }
    o.doc["per_vertex"] = pv;
    certified = rep.all_pass && reason.empty();
    if (certified) {
        const auto b = certified_bound(rep, inst.num_vertices());
        o.doc["certified"] = true;
        o.doc["certified_continuous"] = jnum(b.continuous);
        o.doc["log_certified_continuous"] = b.log_continuous;
        o.doc["certified_gap"] = b.gap;
        o.doc["certified_discrete"] = jnum(b.discrete);
        o.doc["log_certified_discrete"] = b.log_discrete;
    } else {
        o.doc["certified"] = false;
        o.doc["certified_continuous"] = nullptr;
        o.doc["certified_gap"] = nullptr;
        o.doc["certified_discrete"] = nullptr;
        o.doc["reason"] = reason.empty() ? rep.failure : reason;
    }
    return o;
}

// --- cutwidth ------------------------------------------------------------------

struct CutwidthArgs {
    std::string in;
    bool exact = false;
    bool tree_bound = false;
    std::vector<std::string> gw; // d, depth, samples
    bool include_ordering = false;
};

inline Output cmd_cutwidth(const GlobalOptions& g, const CutwidthArgs& a) {
    Output o;
    if (!a.gw.empty()) {
        if (a.gw.size() != 3) throw invalid_input("--gw takes three values: d depth samples");
        double d;
        std::size_t depth, samples;
        try {
            d = std::stod(a.gw[0]);
            depth = std::stoul(a.gw[1]);
            samples = std::stoul(a.gw[2]);
        } catch (const std::exception&) {
            throw invalid_input("--gw takes three numbers: d depth samples");
        }
        const std::uint64_t seed = require_seed(g, "cutwidth --gw");
        const auto s = gw_cutwidth_stats(d, depth, samples, seed, g.threads, g.cap.value_or(16));
        std::vector<double> vals(s.tree_bound.begin(), s.tree_bound.end());
        std::sort(vals.begin(), vals.end());
        std::vector<long> lv(s.tree_bound.begin(), s.tree_bound.end());
        const auto shift = calibrate_depth_shift({lv}, {depth}, d, 15);
        o.doc["d"] = d;
        o.doc["depth"] = depth;
        o.doc["samples"] = samples;
        o.doc["seed"] = seed;
        o.doc["mean"] = s.mean_bound;
        o.doc["quantiles"] = {{"q50", quantile_sorted(vals, 0.5)},
                              {"q90", quantile_sorted(vals, 0.9)},
                              {"q99", quantile_sorted(vals, 0.99)},
                              {"max", vals.back()}};
        o.doc["calibrated_shift"] = shift.pass ? json(shift.shift) : json(nullptr);
        o.doc["exact_mismatches"] = s.exact_mismatches;
        o.header = {"sample", "size", "tree_bound", "exact"};
        for (std::size_t i = 0; i < samples; ++i)
            o.rows.push_back({std::to_string(i), std::to_string(s.sizes[i]), std::to_string(s.tree_bound[i]),
                              s.exact[i] >= 0 ? std::to_string(s.exact[i]) : ""});
        return o;
    }
    if (a.in.empty()) throw invalid_input("cutwidth needs --in or --gw");
    if (a.exact == a.tree_bound) throw invalid_input("choose exactly one of --exact, --tree-bound, --gw");
    const auto inst = load_instance(a.in);
    const auto r = a.exact ? cutwidth_exact(inst.graph(), g.cap.value_or(cutwidth_exact_cap))
                           : tree_cutwidth_ordering(inst.graph());
    o.doc["kind"] = to_string(r.kind);
    o.doc["value"] = r.value;
    o.doc["witness_width"] = ordering_width(inst.graph(), r.ordering);
    if (a.include_ordering) o.doc["ordering"] = r.ordering;
    o.header = {"kind", "value", "witness_width"};
    o.rows.push_back({to_string(r.kind), std::to_string(r.value), std::to_string(ordering_width(inst.graph(), r.ordering))});
    return o;
}

// --- dispatch ------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Glauber dynamics laboratory for the ferromagnetic Ising model", "glauber"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value configuration file; command-line flags override it");

    GlobalOptions g;
    app.add_option("--seed", g.seed, "Master seed (required by stochastic commands)");
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Output path (stdout when omitted)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--cap", g.cap, "Size cap override for the selected command");

    auto add_family = [](CLI::App* s, family_params& f) {
        s->add_option("--family", f.family, "Graph family")
            ->check(CLI::IsMember({"er", "regular", "gw", "cycle", "path", "star", "grid", "complete", "file"}));
        s->add_option("--d", f.d, "Degree or mean degree");
        s->add_option("--depth", f.depth, "Galton-Watson depth");
        s->add_option("--rows", f.rows, "Grid rows");
        s->add_option("--cols", f.cols, "Grid columns");
    };

    GenArgs gen;
    auto* sgen = app.add_subcommand("gen", "Generate an instance file");
    add_family(sgen, gen.fam);
    sgen->add_option("--n", gen.fam.n, "Vertex count");
    sgen->add_option("--beta", gen.beta, "Uniform coupling")->check(CLI::NonNegativeNumber);
    sgen->add_option("--field", gen.field, "Uniform external field");
    sgen->add_option("--in", gen.in, "Source instance for family 'file'");

    std::string exact_in;
    auto* sexact = app.add_subcommand("exact", "Exact distribution, spectrum and mixing times");
    sexact->add_option("--in", exact_in, "Instance file")->required();

    SawArgs saw;
    auto* ssaw = app.add_subcommand("saw", "Self-avoiding-walk tree bound a_u on S(v,R)");
    ssaw->add_option("--in", saw.in, "Instance file")->required();
    ssaw->add_option("--v", saw.v, "Center vertex")->required();
    ssaw->add_option("--R", saw.R, "Radius")->required()->check(CLI::PositiveNumber);
    ssaw->add_flag("--exact", saw.exact, "Also compute the exact boundary influence");

    CoupleArgs couple;
    auto* scouple = app.add_subcommand("couple", "Grand-coupling runs on one instance");
    scouple->add_option("--in", couple.in, "Instance file")->required();
    scouple->add_option("--mode", couple.mode, "discrete or continuous");
    scouple->add_option("--horizon", couple.horizon, "Horizon cap (steps or time)")->required();
    scouple->add_option("--replicas", couple.replicas, "Replica count");
    scouple->add_option("--checkpoints", couple.checkpoints, "Geometric checkpoint count (0 = none)");
    scouple->add_option("--censor-center", couple.censor_center, "Only update B(v,R-1) of this vertex");
    scouple->add_option("--censor-radius", couple.censor_radius, "Radius R for --censor-center");
    scouple->add_flag("--track-middle", couple.track_middle, "Track a random-start chain between the extremes");

    ScanArgs scan;
    auto* sscan = app.add_subcommand("scan", "Coupling-time scan over n and beta grids");
    add_family(sscan, scan.fam);
    sscan->add_option("--n", scan.ns, "Vertex counts")->required()->delimiter(',');
    sscan->add_option("--beta", scan.betas, "Couplings")->delimiter(',');
    sscan->add_option("--tanh-ratio", scan.tanh_ratios, "Values of (d-1) tanh(beta)")->delimiter(',');
    sscan->add_option("--field", scan.field, "Uniform external field");
    sscan->add_option("--replicas", scan.replicas, "Replicas per point");
    sscan->add_option("--mode", scan.mode, "discrete or continuous");
    sscan->add_option("--horizon", scan.horizon, "Absolute horizon cap");
    sscan->add_option("--horizon-factor", scan.horizon_factor, "Cap as a multiple of n ln n (discrete) or ln n");
    sscan->add_flag("--fixed-graph", scan.fixed_graph, "Reuse one random graph for all replicas");

    CertifyArgs cert;
    auto* scert = app.add_subcommand("certify", "Check the volume, local and spatial mixing conditions");
    scert->add_option("--in", cert.in, "Instance file")->required();
    scert->add_option("--R", cert.R, "Radius or 'auto'");
    scert->add_option("--max-R", cert.max_R, "Largest radius tried by --R auto");
    scert->add_option("--lm", cert.lm, "Local mixing mode")->check(CLI::IsMember({"exact", "extremal", "cutwidth"}));
    scert->add_option("--boundary-cap", cert.boundary_cap, "Largest sphere enumerated in exact mode");
    scert->add_flag("--theorem1", cert.theorem1, "Use the explicit degree/beta constants");

    CutwidthArgs cw;
    auto* scw = app.add_subcommand("cutwidth", "Cut-width of an instance graph or Galton-Watson statistics");
    scw->add_option("--in", cw.in, "Instance file");
    scw->add_flag("--exact", cw.exact, "Exact subset DP");
    scw->add_flag("--tree-bound", cw.tree_bound, "Recursive tree ordering bound");
    scw->add_option("--gw", cw.gw, "d depth samples")->expected(3);
    scw->add_flag("--include-ordering", cw.include_ordering, "Include the witness ordering");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return bad_input;
    }

    try {
        int code = ok;
        if (*sgen) return cmd_gen(g, gen, out, err);
        Output o;
        if (*sexact) o = cmd_exact(g, exact_in);
        else if (*ssaw) o = cmd_saw(g, saw);
        else if (*scouple) o = cmd_couple(g, couple);
        else if (*sscan) o = cmd_scan(g, scan);
        else if (*scw) o = cmd_cutwidth(g, cw);
        else if (*scert) {
            bool certified = false;
            o = cmd_certify(g, cert, certified);
            if (!certified) code = refused;
        }
        emit(g, o, out, err);
        return code;
    } catch (const certification_refused& e) {
        err << "refused: " << e.what() << '\n';
        return refused;
    } catch (const size_cap_exceeded& e) {
        err << "size cap: " << e.what() << '\n';
        return size_cap;
    } catch (const invalid_input& e) {
        err << "invalid input: " << e.what() << '\n';
        return bad_input;
    }
}

} // namespace glauber::cli
