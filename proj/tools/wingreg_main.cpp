// wingreg: simulation, design, and data-analysis toolkit for linkage-length
// thrust regulation on a flapping-wing platform. Subcommands cover the
// planar linkage solver, regulator length sweeps, the lift/regulator force
// budget, amplifier mechanism design, the slip-stick actuator simulator, and
// flap-test log reduction. All runs are file-based and reproducible: the
// same argv and inputs produce byte-identical primary outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "wingreg/actuator.hpp"
#include "wingreg/csv.hpp"
#include "wingreg/errors.hpp"
#include "wingreg/flap_io.hpp"
#include "wingreg/force_budget.hpp"
#include "wingreg/gait.hpp"
#include "wingreg/linkage_json.hpp"
#include "wingreg/mechanism.hpp"
#include "wingreg/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wingreg;

namespace {

struct CommonOpts {
    std::string out_dir = "out";
    bool force = false;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--out", common.out_dir, "Output directory")->capture_default_str();
    cmd->add_flag("--force", common.force, "Overwrite existing output files");
    cmd->add_option("--threads", common.threads, "Worker threads (0 = auto)")
        ->capture_default_str();
}

// Every write goes through here so the no-clobber rule is uniform.
class OutputDir {
public:
    OutputDir(const CommonOpts& common, const std::string& subcommand)
        : dir_(common.out_dir), force_(common.force), subcommand_(subcommand) {
        fs::create_directories(dir_);
    }

    fs::path reserve(const std::string& name) {
        fs::path p = dir_ / name;
        if (fs::exists(p) && !force_)
            throw IoError("'" + p.string() + "' exists; pass --force to overwrite");
        outputs_.push_back(name);
        return p;
    }

    void add_input(const std::string& path) { inputs_.push_back(path); }
    void set_parameters(json params) { parameters_ = std::move(params); }

    void write_manifest() {
        fs::path p = dir_ / "manifest.json";
        if (fs::exists(p) && !force_)
            throw IoError("'" + p.string() + "' exists; pass --force to overwrite");
        const auto now = std::chrono::system_clock::now();
        const std::time_t tt = std::chrono::system_clock::to_time_t(now);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
        json doc{{"subcommand", subcommand_}, {"tool_version", kVersion},
                 {"timestamp_utc", stamp},   {"inputs", inputs_},
                 {"parameters", parameters_}, {"outputs", outputs_}};
        std::ofstream f(p, std::ios::binary);
        f << doc.dump(2) << '\n';
    }

private:
    fs::path dir_;
    bool force_;
    std::string subcommand_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    json parameters_;
};

void write_json_file(const fs::path& path, const json& doc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << doc.dump(2) << '\n';
}

// start:end:count (inclusive, evenly spaced) or a comma-separated list
std::vector<double> parse_lengths(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw ValidationError("length range must be start:end:count");
        const double start = parse_double(text.substr(0, c1));
        const double end = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
        const long count = std::lround(parse_double(text.substr(c2 + 1)));
        if (count < 1) throw ValidationError("length range count must be >= 1");
        if (count == 1) {
            out.push_back(start);
        } else {
            for (long i = 0; i < count; ++i)
                out.push_back(start + (end - start) * static_cast<double>(i) /
                                          static_cast<double>(count - 1));
        }
        return out;
    }
    for (const auto& cell : split_csv_line(text)) out.push_back(parse_double(cell));
    return out;
}

json feasibility_to_json(const FeasibilityReport& rep) {
    return {{"output_stroke_mm", rep.output_stroke_mm},
            {"min_force_ma", rep.min_force_ma},
            {"deliverable_force_gf", rep.deliverable_force_gf},
            {"used_input_mm", rep.used_input_mm},
            {"displacement_pass", rep.displacement_pass},
            {"force_pass", rep.force_pass},
            {"pass", rep.pass}};
}

void write_curve_csv(const fs::path& path, const MechanismCurve& curve) {
    std::vector<std::vector<double>> rows;
    rows.reserve(curve.samples.size());
    for (const CurveSample& s : curve.samples)
        rows.push_back({s.d_input_mm, s.d_output_mm, s.ma_effective, s.ma_instantaneous});
    write_csv(path.string(), {"d_input_mm", "d_output_mm", "ma_effective", "ma_instantaneous"},
              rows);
}

// ---------------------------------------------------------------- solve ---

struct SolveArgs {
    CommonOpts common;
    std::string def_path;
    double angle_deg = 0.0;
    double tol = 1e-9;
    int max_iter = 50;
};

int run_solve(const SolveArgs& a) {
    OutputDir out(a.common, "solve");
    out.add_input(a.def_path);
    out.set_parameters({{"angle_deg", a.angle_deg}, {"tol", a.tol}, {"max_iter", a.max_iter}});

    LinkageDef def = load_linkage(a.def_path);
    SolverConfig cfg;
    cfg.tolerance = a.tol;
    cfg.max_iterations = a.max_iter;
    const double angle = a.angle_deg * M_PI / 180.0;
    Pose pose = solve_pose(def, angle, def.reference_guess(), cfg);

    json points;
    for (const auto& [id, p] : pose.coordinates) points[id] = {p.x, p.y};
    write_json_file(out.reserve("pose.json"),
                    {{"crank_angle_rad", pose.crank_angle},
                     {"crank_angle_deg", a.angle_deg},
                     {"residual_mm", pose.residual},
                     {"points", points}});
    out.write_manifest();
    std::printf("solved %s at %s deg, residual %s mm\n", a.def_path.c_str(),
                format_double(a.angle_deg).c_str(), format_double(pose.residual).c_str());
    return 0;
}

// --------------------------------------------------------- sweep-length ---

struct SweepArgs {
    CommonOpts common;
    std::string def_path;
    std::string bar = "R1";
    std::string lengths_text;
    std::string marker = "J10";
    std::string shoulder_pivot = "J5";
    std::string shoulder_ray = "J9";
    double step_deg = 1.0;
    double tol = 1e-9;
};

int run_sweep(const SweepArgs& a) {
    OutputDir out(a.common, "sweep-length");
    out.add_input(a.def_path);
    out.set_parameters({{"bar", a.bar},
                        {"lengths", a.lengths_text},
                        {"marker", a.marker},
                        {"shoulder_pivot", a.shoulder_pivot},
                        {"shoulder_ray", a.shoulder_ray},
                        {"step_deg", a.step_deg},
                        {"tol", a.tol}});

    LengthSweepSpec spec{load_linkage(a.def_path), a.bar, parse_lengths(a.lengths_text), a.marker,
                         a.shoulder_pivot, a.shoulder_ray};
    SolverConfig cfg;
    cfg.tolerance = a.tol;
    cfg.continuation_step = a.step_deg * M_PI / 180.0;
    auto results = run_length_sweep(spec, cfg, a.common.threads);

    // per-length trajectory CSVs: crank angle then x/y per point in def order
    std::vector<std::string> header{"crank_angle_rad"};
    for (const auto& p : spec.base_def.points()) {
        header.push_back(p.id + "_x");
        header.push_back(p.id + "_y");
    }
    std::vector<std::vector<double>> metric_rows;
    for (const auto& [traj, metrics] : results) {
        std::vector<std::vector<double>> rows;
        rows.reserve(traj.poses.size());
        for (const Pose& pose : traj.poses) {
            std::vector<double> row{pose.crank_angle};
            for (const auto& p : spec.base_def.points()) {
                const Vec2& c = pose.at(p.id);
                row.push_back(c.x);
                row.push_back(c.y);
            }
            rows.push_back(std::move(row));
        }
        write_csv(out.reserve("gait_L" + format_double(traj.length_mm) + ".csv").string(), header,
                  rows);
        metric_rows.push_back({traj.length_mm, metrics.sweep_amplitude_deg,
                               metrics.envelope_area_mm2, metrics.marker_extent_mm});
    }
    write_csv(out.reserve("metrics.csv").string(),
              {"length_mm", "sweep_amplitude_deg", "envelope_area_mm2", "marker_extent_mm"},
              metric_rows);
    out.write_manifest();
    std::printf("swept %zu lengths of %s\n", results.size(), a.bar.c_str());
    return 0;
}

// --------------------------------------------------------- force-budget ---

struct BudgetArgs {
    CommonOpts common;
    double mass_kg = 0.035;
    double g = 9.81;
    double thrust_margin = 1.33;
    double fos = 2.0;
    double arm_out_mm = 78.89;
    double arm_in_mm = 15.6;
    double displacement_mm = 1.5;
};

int run_budget(const BudgetArgs& a) {
    OutputDir out(a.common, "force-budget");
    out.set_parameters({{"mass_kg", a.mass_kg},
                        {"g", a.g},
                        {"thrust_margin", a.thrust_margin},
                        {"fos", a.fos},
                        {"arm_out_mm", a.arm_out_mm},
                        {"arm_in_mm", a.arm_in_mm},
                        {"displacement_mm", a.displacement_mm}});

    ForceBudget budget{a.mass_kg, a.g, a.thrust_margin, a.fos};
    LeverStage lever{a.arm_out_mm, a.arm_in_mm};
    const double lift = single_wing_lift_N(budget);
    const RegulatorLoad load = regulator_load(budget, lever);
    const RegulatorRequirement req = requirement_table(budget, lever, a.displacement_mm);

    write_json_file(out.reserve("requirement.json"),
                    {{"single_wing_lift_N", lift},
                     {"regulator_load_N", load.newtons},
                     {"regulator_load_gf", load.grams_force},
                     {"requirement",
                      {{"displacement_mm", req.displacement_mm},
                       {"actuation_force_gf", req.actuation_force_gf}}}});

    std::printf("single-wing lift      %12s N\n", format_double(lift).c_str());
    std::printf("regulator load        %12s N\n", format_double(load.newtons).c_str());
    std::printf("regulator load        %12s gf\n", format_double(load.grams_force).c_str());
    std::printf("required displacement %12s mm\n", format_double(req.displacement_mm).c_str());
    out.write_manifest();
    return 0;
}

// ----------------------------------------------------------------- mech ---

struct MechArgs {
    CommonOpts common;
    std::string type = "triangle";
    double d_initial = 8.0;
    double base = 5.0;
    double hyp = 20.0;
    double arm_in = 15.6;
    double arm_out = 78.89;
    double stroke = 6.0;
    int samples = 600;
    std::string actuator_path;
    double req_displacement = 0.0;
    double req_force = 0.0;
};

int run_mech(const MechArgs& a) {
    OutputDir out(a.common, "mech");
    out.set_parameters({{"type", a.type},
                        {"d_initial", a.d_initial},
                        {"base", a.base},
                        {"hyp", a.hyp},
                        {"arm_in", a.arm_in},
                        {"arm_out", a.arm_out},
                        {"stroke", a.stroke},
                        {"samples", a.samples}});

    MechanismCurve curve;
    if (a.type == "triangle") {
        TriangleMechanism mech{a.d_initial, a.base, a.hyp, a.stroke};
        curve = ma_curve(mech, a.samples);
    } else if (a.type == "lever") {
        curve = lever_curve(a.arm_in, a.arm_out, a.stroke, a.samples);
    } else {
        curve = direct_drive_curve(a.stroke, a.samples);
    }
    write_curve_csv(out.reserve("curve.csv"), curve);

    if (!a.actuator_path.empty()) {
        out.add_input(a.actuator_path);
        ActuatorSpec act = load_actuator_spec(a.actuator_path);
        RegulatorRequirement req{a.req_displacement, a.req_force};
        FeasibilityReport rep = feasibility(curve, act, req);
        write_json_file(out.reserve("feasibility.json"), feasibility_to_json(rep));
        std::printf("displacement %s, force %s -> %s\n",
                    rep.displacement_pass ? "PASS" : "FAIL", rep.force_pass ? "PASS" : "FAIL",
                    rep.pass ? "PASS" : "FAIL");
    }
    out.write_manifest();
    return 0;
}

// ------------------------------------------------------------- optimize ---

struct OptimizeArgs {
    CommonOpts common;
    std::string actuator_path;
    double req_displacement = 1.5;
    double req_force = 235.45;
    TriangleBounds bounds{4.0, 12.0, 2.0, 10.0, 8.0, 40.0};
    int grid = 50;
};

int run_optimize(const OptimizeArgs& a) {
    OutputDir out(a.common, "optimize");
    out.add_input(a.actuator_path);
    out.set_parameters({{"req_displacement_mm", a.req_displacement},
                        {"req_force_gf", a.req_force},
                        {"d_initial", {a.bounds.d_initial_min, a.bounds.d_initial_max}},
                        {"base", {a.bounds.base_min, a.bounds.base_max}},
                        {"hyp", {a.bounds.hyp_min, a.bounds.hyp_max}},
                        {"grid", a.grid}});

    ActuatorSpec act = load_actuator_spec(a.actuator_path);
    RegulatorRequirement req{a.req_displacement, a.req_force};
    TriangleMechanism mech = optimize_triangle(req, act, a.bounds, a.grid);
    FeasibilityReport rep = feasibility(ma_curve(mech, 600), act, req);

    write_json_file(out.reserve("design.json"),
                    {{"d_initial_mm", mech.d_initial_mm},
                     {"base_mm", mech.base_mm},
                     {"hyp_mm", mech.hyp_mm},
                     {"stroke_mm", mech.stroke_mm},
                     {"feasibility", feasibility_to_json(rep)}});
    out.write_manifest();
    std::printf("best triangle: d_initial %s, base %s, hyp %s mm\n",
                format_double(mech.d_initial_mm).c_str(), format_double(mech.base_mm).c_str(),
                format_double(mech.hyp_mm).c_str());
    return 0;
}

// -------------------------------------------------------------- actuate ---

struct ActuateArgs {
    CommonOpts common;
    std::string spec_path;
    double target_um = 0.0;
    double start_um = 0.0;
    double step_um = 0.0;  // 0 = spec default
    double load_gf = 0.0;
    std::string load_profile_path;
    long max_pulses = 10000000;
    std::string trace_name = "trace.csv";
};

int run_actuate(const ActuateArgs& a) {
    OutputDir out(a.common, "actuate");
    out.add_input(a.spec_path);
    out.set_parameters({{"target_um", a.target_um},
                        {"start_um", a.start_um},
                        {"step_um", a.step_um},
                        {"load_gf", a.load_gf},
                        {"load_profile", a.load_profile_path},
                        {"max_pulses", a.max_pulses}});

    ActuatorSpec spec = load_actuator_spec(a.spec_path);
    SlipStickActuator act(spec, a.step_um, a.start_um);

    std::function<double(double)> profile;
    if (!a.load_profile_path.empty()) {
        out.add_input(a.load_profile_path);
        CsvTable table = read_csv(a.load_profile_path);
        if (table.header != std::vector<std::string>{"position_um", "load_gf"})
            throw IoError("load profile CSV must have header position_um,load_gf");
        if (table.rows.empty()) throw IoError("load profile CSV has no rows");
        auto rows = table.rows;
        profile = [rows](double pos) {
            if (pos <= rows.front()[0]) return rows.front()[1];
            if (pos >= rows.back()[0]) return rows.back()[1];
            for (std::size_t i = 1; i < rows.size(); ++i) {
                if (pos <= rows[i][0]) {
                    const double w = (pos - rows[i - 1][0]) / (rows[i][0] - rows[i - 1][0]);
                    return rows[i - 1][1] + w * (rows[i][1] - rows[i - 1][1]);
                }
            }
            return rows.back()[1];
        };
    } else {
        const double load = a.load_gf;
        profile = [load](double) { return load; };
    }

    SeekResult res = act.seek(a.target_um, profile, a.max_pulses);

    std::vector<std::vector<double>> rows;
    rows.reserve(res.trace.size());
    for (const auto& [pulse, pos] : res.trace)
        rows.push_back({static_cast<double>(pulse), pos});
    write_csv(out.reserve(a.trace_name).string(), {"pulse", "position_um"}, rows);
    write_json_file(out.reserve("result.json"), {{"arrived", res.arrived},
                                                 {"pulses_used", res.pulses_used},
                                                 {"end_position_um", res.end_position_um}});
    out.write_manifest();
    std::printf("%s at %s um after %lld pulses\n", res.arrived ? "arrived" : "stopped",
                format_double(res.end_position_um).c_str(),
                static_cast<long long>(res.pulses_used));
    return 0;
}

// -------------------------------------------------------------- analyze ---

struct AnalyzeArgs {
    CommonOpts common;
    std::string manifest_path;
    std::string axis = "fz";
    double rate_hz = 7000.0;
};

int run_analyze(const AnalyzeArgs& a) {
    OutputDir out(a.common, "analyze");
    out.add_input(a.manifest_path);
    out.set_parameters({{"axis", a.axis}, {"rate_hz", a.rate_hz}});

    const fs::path base = fs::path(a.manifest_path).parent_path();
    std::vector<MatrixEntry> entries;
    for (const ManifestEntry& m : load_manifest(a.manifest_path)) {
        MatrixEntry e;
        e.r1_length_mm = m.r1_length_mm;
        e.frequency_hz = m.frequency_hz;
        e.trial = m.trial;
        e.force = load_force_csv((base / m.force_csv).string(), a.rate_hz);
        e.angle = load_angle_csv((base / m.angle_csv).string());
        e.quiet_window_s = m.quiet_window_s;
        entries.push_back(std::move(e));
    }

    AnalysisOptions opts;
    opts.axis = lift_axis_from_name(a.axis);
    SummaryReport report = summarize(entries, opts, a.common.threads);

    json conditions = json::array();
    std::vector<std::vector<double>> cycle_rows;
    for (const ConditionSummary& c : report.conditions) {
        json trials = json::array();
        for (const TrialResult& tr : c.trials) {
            trials.push_back({{"trial", tr.trial},
                              {"failed", tr.failed},
                              {"error_id", tr.error_id},
                              {"offset_s", tr.offset_s},
                              {"n_cycles", tr.cycles.size()}});
            for (std::size_t k = 0; k < tr.cycles.size(); ++k) {
                const CycleMetrics& m = tr.cycles[k];
                cycle_rows.push_back({c.r1_length_mm, c.frequency_hz,
                                      static_cast<double>(tr.trial), static_cast<double>(k),
                                      m.peak_lift_N, m.peak_timing_fraction, m.mean_lift_N,
                                      m.cycle_duration_s});
            }
        }
        auto agg = [](const Aggregate& g) {
            return json{{"mean", g.mean}, {"min", g.min}, {"max", g.max}, {"count", g.count}};
        };
        conditions.push_back({{"r1_length_mm", c.r1_length_mm},
                              {"frequency_hz", c.frequency_hz},
                              {"trials", trials},
                              {"peak_lift_N", agg(c.peak_lift_N)},
                              {"peak_timing_fraction", agg(c.peak_timing_fraction)}});
    }
    json comparisons = json::array();
    for (const ConditionComparison& cmp : report.comparisons)
        comparisons.push_back({{"frequency_hz", cmp.frequency_hz},
                               {"r1_length_mm", cmp.r1_length_mm},
                               {"shortest_length_mm", cmp.shortest_length_mm},
                               {"peak_force_ratio", cmp.peak_force_ratio},
                               {"peak_timing_shift", cmp.peak_timing_shift}});

    write_json_file(out.reserve("summary.json"),
                    {{"conditions", conditions}, {"comparisons", comparisons}});
    write_csv(out.reserve("cycles.csv").string(),
              {"r1_length_mm", "frequency_hz", "trial", "cycle_index", "peak_lift_N",
               "peak_timing_fraction", "mean_lift_N", "duration_s"},
              cycle_rows);
    out.write_manifest();
    std::printf("analyzed %zu trials over %zu conditions\n", entries.size(),
                report.conditions.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linkage-length thrust regulation toolkit"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one linkage pose at a crank angle");
    solve_cmd->add_option("--def", solve_args.def_path, "Linkage definition JSON")->required();
    solve_cmd->add_option("--angle-deg", solve_args.angle_deg, "Crank angle in degrees")
        ->required();
    solve_cmd->add_option("--tol", solve_args.tol, "Residual tolerance, mm")
        ->capture_default_str();
    solve_cmd->add_option("--max-iter", solve_args.max_iter, "Newton iteration cap")
        ->capture_default_str()
        ->check(CLI::Range(1, 10000));
    add_common(solve_cmd, solve_args.common);

    SweepArgs sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("sweep-length", "Sweep a named bar length over full gait cycles");
    sweep_cmd->add_option("--def", sweep_args.def_path, "Linkage definition JSON")->required();
    sweep_cmd->add_option("--bar", sweep_args.bar, "Named bar to sweep")->capture_default_str();
    sweep_cmd
        ->add_option("--lengths", sweep_args.lengths_text,
                     "start:end:count (inclusive) or comma-separated mm values")
        ->required();
    sweep_cmd->add_option("--marker", sweep_args.marker, "Marker point (wingtip)")
        ->capture_default_str();
    sweep_cmd->add_option("--shoulder-pivot", sweep_args.shoulder_pivot, "Shoulder pivot point")
        ->capture_default_str();
    sweep_cmd->add_option("--shoulder-ray", sweep_args.shoulder_ray, "Shoulder ray point")
        ->capture_default_str();
    sweep_cmd->add_option("--step-deg", sweep_args.step_deg, "Crank step, degrees")
        ->capture_default_str()
        ->check(CLI::Range(1e-3, 22.5));
    sweep_cmd->add_option("--tol", sweep_args.tol, "Residual tolerance, mm")
        ->capture_default_str();
    add_common(sweep_cmd, sweep_args.common);

    BudgetArgs budget_args;
    auto* budget_cmd =
        app.add_subcommand("force-budget", "Lift requirement and regulator load table");
    budget_cmd->add_option("--mass-kg", budget_args.mass_kg, "Flight mass, kg")
        ->capture_default_str();
    budget_cmd->add_option("--g", budget_args.g, "Gravitational acceleration, m/s^2")
        ->capture_default_str();
    budget_cmd->add_option("--thrust-margin", budget_args.thrust_margin, "Thrust margin T_max")
        ->capture_default_str();
    budget_cmd->add_option("--fos", budget_args.fos, "Factor of safety")->capture_default_str();
    budget_cmd->add_option("--arm-out-mm", budget_args.arm_out_mm, "Distal moment arm, mm")
        ->capture_default_str();
    budget_cmd->add_option("--arm-in-mm", budget_args.arm_in_mm, "Proximal moment arm, mm")
        ->capture_default_str();
    budget_cmd
        ->add_option("--displacement-mm", budget_args.displacement_mm, "Required stroke, mm")
        ->capture_default_str();
    add_common(budget_cmd, budget_args.common);

    MechArgs mech_args;
    auto* mech_cmd = app.add_subcommand("mech", "Mechanism stroke and MA curves");
    mech_cmd->add_option("--type", mech_args.type, "triangle|lever|direct")
        ->capture_default_str()
        ->check(CLI::IsMember({"triangle", "lever", "direct"}));
    mech_cmd->add_option("--d-initial", mech_args.d_initial, "Initial input offset, mm")
        ->capture_default_str();
    mech_cmd->add_option("--base", mech_args.base, "Base offset, mm")->capture_default_str();
    mech_cmd->add_option("--hyp", mech_args.hyp, "Hypotenuse link, mm")->capture_default_str();
    mech_cmd->add_option("--arm-in", mech_args.arm_in, "Lever input arm, mm")
        ->capture_default_str();
    mech_cmd->add_option("--arm-out", mech_args.arm_out, "Lever output arm, mm")
        ->capture_default_str();
    mech_cmd->add_option("--stroke", mech_args.stroke, "Input stroke, mm")->capture_default_str();
    mech_cmd->add_option("--samples", mech_args.samples, "Curve samples")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    mech_cmd->add_option("--actuator", mech_args.actuator_path, "Actuator spec JSON");
    mech_cmd->add_option("--req-displacement-mm", mech_args.req_displacement,
                         "Requirement: output displacement, mm");
    mech_cmd->add_option("--req-force-gf", mech_args.req_force, "Requirement: output force, gf");
    add_common(mech_cmd, mech_args.common);

    OptimizeArgs opt_args;
    auto* opt_cmd =
        app.add_subcommand("optimize", "Search triangle geometry meeting a requirement");
    opt_cmd->add_option("--actuator", opt_args.actuator_path, "Actuator spec JSON")->required();
    opt_cmd->add_option("--req-displacement-mm", opt_args.req_displacement, "Required stroke, mm")
        ->capture_default_str();
    opt_cmd->add_option("--req-force-gf", opt_args.req_force, "Required force, gf")
        ->capture_default_str();
    opt_cmd->add_option("--d-initial-min", opt_args.bounds.d_initial_min)->capture_default_str();
    opt_cmd->add_option("--d-initial-max", opt_args.bounds.d_initial_max)->capture_default_str();
    opt_cmd->add_option("--base-min", opt_args.bounds.base_min)->capture_default_str();
    opt_cmd->add_option("--base-max", opt_args.bounds.base_max)->capture_default_str();
    opt_cmd->add_option("--hyp-min", opt_args.bounds.hyp_min)->capture_default_str();
    opt_cmd->add_option("--hyp-max", opt_args.bounds.hyp_max)->capture_default_str();
    opt_cmd->add_option("--grid", opt_args.grid, "Grid resolution per axis")
        ->capture_default_str()
        ->check(CLI::Range(1, 200));
    add_common(opt_cmd, opt_args.common);

    ActuateArgs act_args;
    auto* act_cmd = app.add_subcommand("actuate", "Slip-stick actuator seek simulation");
    act_cmd->add_option("--spec", act_args.spec_path, "Actuator spec JSON")->required();
    act_cmd->add_option("--target-um", act_args.target_um, "Target position, um")->required();
    act_cmd->add_option("--start-um", act_args.start_um, "Start position, um")
        ->capture_default_str();
    act_cmd->add_option("--step-um", act_args.step_um, "Step size, um (0 = spec default)")
        ->capture_default_str();
    act_cmd->add_option("--load-gf", act_args.load_gf, "Constant opposing load, gf");
    act_cmd->add_option("--load-profile", act_args.load_profile_path,
                        "CSV position_um,load_gf profile");
    act_cmd->add_option("--max-pulses", act_args.max_pulses, "Pulse budget")
        ->capture_default_str();
    act_cmd->add_option("--trace", act_args.trace_name, "Trace CSV filename (under --out)")
        ->capture_default_str();
    add_common(act_cmd, act_args.common);

    AnalyzeArgs an_args;
    auto* an_cmd = app.add_subcommand("analyze", "Reduce flap-test logs per condition manifest");
    an_cmd->add_option("--manifest", an_args.manifest_path, "Condition manifest JSON")->required();
    an_cmd->add_option("--axis", an_args.axis, "Lift axis column")
        ->capture_default_str()
        ->check(CLI::IsMember({"fx", "fy", "fz", "tx", "ty", "tz"}));
    an_cmd->add_option("--rate-hz", an_args.rate_hz, "Nominal force sample rate, Hz")
        ->capture_default_str();
    add_common(an_cmd, an_args.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_args);
        if (budget_cmd->parsed()) return run_budget(budget_args);
        if (mech_cmd->parsed()) return run_mech(mech_args);
        if (opt_cmd->parsed()) return run_optimize(opt_args);
        if (act_cmd->parsed()) return run_actuate(act_args);
        if (an_cmd->parsed()) return run_analyze(an_args);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
