// crease: command-line front end for the crease-rule pattern kernel.
//
// Exit codes: 0 success (or foldable), 1 the pattern or request fails a domain
// check, 2 unreadable input, malformed documents or bad flags.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crease/append.hpp"
#include "crease/compatibility.hpp"
#include "crease/export.hpp"
#include "crease/folding.hpp"
#include "crease/pattern.hpp"
#include "crease/transform.hpp"

namespace {

using namespace crease;
using nlohmann::json;

constexpr int kExitOk = 0, kExitDomain = 1, kExitInput = 2;

struct Options {
    std::optional<int> samples;
    std::string report;  // optional copy of the JSON report
};

// Working sample count: --samples, then CREASE_SAMPLES, else the document's own.
std::optional<int> sample_count(const Options& o) {
    if (o.samples) return o.samples;
    if (const char* env = std::getenv("CREASE_SAMPLES")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 33 || v > (1 << 20))
            throw CreaseError(ErrorCode::BadDocument, std::string("CREASE_SAMPLES must be an integer >= 33, got ") + env);
        return static_cast<int>(v);
    }
    return std::nullopt;
}

CreaseRulePattern load(const std::string& path, const Options& o) { return load_pattern_file(path, sample_count(o)); }

void emit(const json& j, const Options& o) {
    const std::string text = j.dump(2);
    std::cout << text << "\n";
    if (!o.report.empty()) detail::write_text(o.report, text + "\n");
}

void save_pattern(const std::string& path, const CreaseRulePattern& p) {
    detail::write_text(path, to_json(p).dump(1) + "\n");
}

int domain_failure(const std::string& msg) {
    std::cerr << "crease: " << msg << "\n";
    return kExitDomain;
}

int cmd_validate(const std::string& file, const Options& o) {
    const auto p = load(file, o);
    const auto v = validate(p);
    emit(to_json(v), o);
    return v.regular && v.candidate ? kExitOk : kExitDomain;
}

int cmd_check(const std::string& file, const Options& o) {
    const auto p = load(file, o);
    const auto r = compatibility_report(p);
    emit(to_json(r), o);
    for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
    return r.verdict == Verdict::Foldable ? kExitOk : kExitDomain;
}

// Resolves --c1 / --fraction against the motion bound.
double resolve_c1(const CreaseRulePattern& p, const CompatibilityReport& r, std::optional<double> c1,
                  std::optional<double> fraction) {
    if (c1) return *c1;
    if (!(*fraction > 0.0 && *fraction < 1.0)) throw CreaseError(ErrorCode::BadDocument, "--fraction must lie in (0, 1)");
    return *fraction * motion_upper_bound(p, r);
}

int cmd_fold(const std::string& file, std::optional<double> c1, std::optional<double> fraction, const std::string& obj,
             const Options& o) {
    const auto p = load(file, o);
    const auto r = compatibility_report(p);
    if (r.verdict != Verdict::Foldable) return domain_failure("pattern is " + to_string(r.verdict) + "; nothing to fold");
    const double c = resolve_c1(p, r, c1, fraction);
    FoldOutcome out;
    try {
        out = fold_pattern(p, r, c);
    } catch (const CreaseError& e) {
        if (e.code() != ErrorCode::FoldAngleOutOfRange) throw;
        return domain_failure(std::string(e.what()) + "; attainable |c1| < " + std::to_string(motion_upper_bound(p, r)));
    }
    if (out.trivial) return domain_failure("c1 = 0 is the trivial state (flat sheet); no folded state to export");
    if (!obj.empty()) write_obj(obj, *out.state);
    const json s = fold_summary(*out.state, c);
    emit(s, o);
    std::fprintf(stderr, "folded at c1 = %.17g: assembly %.3g, bend residual %.3g\n", c, out.state->assembly_residual,
                 out.state->bend_residual);
    return kExitOk;
}

int cmd_motion(const std::string& file, int steps, const std::string& dir, const Options& o) {
    const auto p = load(file, o);
    const auto r = compatibility_report(p);
    if (r.verdict != Verdict::Foldable) return domain_failure("pattern is " + to_string(r.verdict) + "; no motion");
    const auto m = sample_motion(p, r, steps);
    std::filesystem::create_directories(dir);
    json frames = json::array();
    for (std::size_t k = 0; k < m.states.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.obj", k);
        write_obj(dir + "/" + name, m.states[k]);
        json f = fold_summary(m.states[k], m.c1[k]);
        f["file"] = name;
        frames.push_back(std::move(f));
    }
    const json doc{{"c1_upper", m.c1_upper}, {"c1", m.c1}, {"frames", frames}};
    detail::write_text(dir + "/motion.json", doc.dump(2) + "\n");
    emit(doc, o);
    return kExitOk;
}

int cmd_append(const std::string& file, const std::string& kind, const std::vector<double>& init,
               std::optional<double> width, const std::string& out, const std::string& theta_out, const Options& o) {
    const auto p = load(file, o);
    const AppendInit a{init[0], init[1], init[2]};
    AppendResult res;
    if (kind == "cyl")
        res = append_crease_cylinder(p, a, width);
    else if (kind == "cone")
        res = append_crease_cone(p, a, width);
    else
        res = append_crease_general(p, a, width);
    save_pattern(out, res.extended);
    if (!theta_out.empty())
        detail::write_text(theta_out, json{{"t_max", p.grid.t_max}, {"samples", p.grid.n}, {"theta_2L", res.theta_2L.values()}}.dump(1) + "\n");
    const auto r = compatibility_report(res.extended);
    emit(to_json(r), o);
    return r.verdict == Verdict::Foldable ? kExitOk : kExitDomain;
}

int cmd_pleat(const std::string& file, double offset, double width, const std::string& out, const Options& o) {
    const auto p = load(file, o);
    const auto q = add_parallel_pleat(p, offset, width);
    save_pattern(out, q);
    const auto r = compatibility_report(q);
    emit(to_json(r), o);
    return r.verdict == Verdict::Foldable ? kExitOk : kExitDomain;
}

// p0(t) = scale + amp * sin(freq * t), or samples read from a JSON array.
FuncGrid scale_function(const Grid& g, double scale, double amp, double freq, const std::string& file) {
    if (file.empty()) return FuncGrid::sample(g, [&](double t) { return scale + amp * std::sin(freq * t); });
    const json j = read_json_file(file);
    if (!j.is_array()) throw CreaseError(ErrorCode::BadDocument, file + ": p0 must be an array of reals");
    std::vector<double> v;
    for (const auto& x : j) {
        if (!x.is_number()) throw CreaseError(ErrorCode::BadDocument, file + ": p0 must be an array of reals");
        v.push_back(x.get<double>());
    }
    if (static_cast<int>(v.size()) != g.n)
        throw CreaseError(ErrorCode::BadDocument, file + ": p0 needs one value per sample");
    return {g, std::move(v)};
}

int cmd_combescure(const std::string& file, double scale, double amp, double freq, const std::string& p0_file,
                   const std::string& out, const Options& o) {
    const auto p = load(file, o);
    const auto q = combescure_transform(p, scale_function(p.grid, scale, amp, freq, p0_file));
    save_pattern(out, q);
    const auto r = compatibility_report(q);
    emit(to_json(r), o);
    return r.verdict == Verdict::Foldable ? kExitOk : kExitDomain;
}

int cmd_plot(const std::string& file, const std::string& svg, const Options& o) {
    const auto p = load(file, o);
    std::vector<CreaseClass> classes;
    for (int i = 1; i <= p.crease_count(); ++i) classes.push_back(classify_crease(p, i));
    detail::write_text(svg, pattern_svg(p, classes));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curved-crease origami: validate, fold and construct crease-rule patterns"};
    app.require_subcommand(1);
    Options o;
    int samples = 0;
    app.add_option("--samples", samples, "resample every curve to this many nodes")->check(CLI::Range(33, 1 << 20));
    app.add_option("--report", o.report, "also write the JSON report to this file");

    std::string file;
    auto pattern_arg = [&](CLI::App* c) { c->add_option("pattern", file, "pattern document")->required(); };

    auto* validate_cmd = app.add_subcommand("validate", "check regularity and candidacy");
    pattern_arg(validate_cmd);
    auto* check_cmd = app.add_subcommand("check", "decide rigid-ruling foldability");
    pattern_arg(check_cmd);

    auto* fold_cmd = app.add_subcommand("fold", "fold at one value of c1 and export OBJ");
    pattern_arg(fold_cmd);
    std::optional<double> c1, fraction;
    std::string obj;
    auto* c1_opt = fold_cmd->add_option("--c1", c1, "sin of the inclination of crease 1 at t = 0");
    auto* frac_opt = fold_cmd->add_option("--fraction", fraction, "c1 as a fraction of its upper bound");
    c1_opt->excludes(frac_opt);
    fold_cmd->add_option("--obj", obj, "OBJ output");

    auto* motion_cmd = app.add_subcommand("motion", "sample the folding motion");
    pattern_arg(motion_cmd);
    int steps = 10;
    std::string obj_dir = "motion";
    motion_cmd->add_option("--steps", steps, "number of frames")->check(CLI::PositiveNumber);
    motion_cmd->add_option("--obj-dir", obj_dir, "directory for frame OBJs and motion.json");

    auto* append_cmd = app.add_subcommand("append", "append a compatible crease to a one-crease pattern");
    pattern_arg(append_cmd);
    std::string kind = "general", out, theta_out;
    std::vector<double> init;
    std::optional<double> width;
    append_cmd->add_option("--kind", kind, "host kind")->check(CLI::IsMember({"cyl", "cone", "general"}));
    append_cmd->add_option("--init", init, "l2(0) l2'(0) l2''(0)")->expected(3)->required();
    append_cmd->add_option("--width", width, "distance of the new boundary from the new crease");
    append_cmd->add_option("--out", out, "extended pattern")->required();
    append_cmd->add_option("--theta-out", theta_out, "write theta_2L samples here");

    auto* pleat_cmd = app.add_subcommand("pleat", "add a parallel pleat left of the last crease");
    pattern_arg(pleat_cmd);
    double offset = 1.0, pleat_width = 0.5;
    pleat_cmd->add_option("--offset", offset, "ruling length from the last crease to the new one");
    pleat_cmd->add_option("--width", pleat_width, "ruling length from the new crease to the boundary");
    pleat_cmd->add_option("--out", out, "pleated pattern")->required();

    auto* comb_cmd = app.add_subcommand("combescure", "transform with parallel tangents and rulings");
    pattern_arg(comb_cmd);
    double scale = 1.0, amp = 0.0, freq = 1.0;
    std::string p0_file;
    comb_cmd->add_option("--p0", scale, "constant part of the tangent scale p0");
    comb_cmd->add_option("--p0-sin", amp, "amplitude of a sin(freq t) term in p0");
    comb_cmd->add_option("--p0-freq", freq, "frequency of the sine term");
    comb_cmd->add_option("--p0-file", p0_file, "JSON array with p0 at every sample");
    comb_cmd->add_option("--out", out, "transformed pattern")->required();

    auto* plot_cmd = app.add_subcommand("plot", "draw the pattern as SVG");
    pattern_arg(plot_cmd);
    std::string svg;
    plot_cmd->add_option("--svg", svg, "SVG output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }
    if (samples) o.samples = samples;

    try {
        if (*validate_cmd) return cmd_validate(file, o);
        if (*check_cmd) return cmd_check(file, o);
        if (*fold_cmd) {
            if (!c1 && !fraction) throw CreaseError(ErrorCode::BadDocument, "fold needs --c1 or --fraction");
            return cmd_fold(file, c1, fraction, obj, o);
        }
        if (*motion_cmd) return cmd_motion(file, steps, obj_dir, o);
        if (*append_cmd) return cmd_append(file, kind, init, width, out, theta_out, o);
        if (*pleat_cmd) return cmd_pleat(file, offset, pleat_width, out, o);
        if (*comb_cmd) return cmd_combescure(file, scale, amp, freq, p0_file, out, o);
        if (*plot_cmd) return cmd_plot(file, svg, o);
    } catch (const CreaseError& e) {
        std::cerr << "crease: " << e.what() << "\n";
        return e.code() == ErrorCode::BadDocument ? kExitInput : kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "crease: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
