// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "degfuse/errors.hpp"
#include "degfuse/joint.hpp"
#include "degfuse/metrics.hpp"
#include "degfuse/opspec.hpp"
#include "degfuse/pgm.hpp"
#include "degfuse/sampler.hpp"
#include "degfuse/tiny_net.hpp"
#include "degfuse/train.hpp"

namespace degfuse::cli {

namespace fs = std::filesystem;

namespace {

/// Thrown when a verification subcommand finds a violated property.
class VerificationFailure : public Error {
public:
    using Error::Error;
};

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string shell_quote(const std::string& s) {
    if (!s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_./:=+,") ==
                          std::string::npos) {
        return s;
    }
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

struct Globals {
    std::uint64_t seed = 42;
    std::string out_dir = ".";

    fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
};

/// Fully resolved flags of one invocation, written as run.txt.
class Manifest {
public:
    Manifest(std::string command, const Globals& g) : m_command(std::move(command)) {
        add("--out-dir", g.out_dir);
        add("--seed", std::to_string(g.seed));
    }

    void add(const std::string& flag, const std::string& value) { m_entries.emplace_back(flag, value); }
    void add(const std::string& flag, double value) { add(flag, num(value)); }
    void add_switch(const std::string& flag, bool on) {
        if (on) m_entries.emplace_back(flag, std::string());
    }

    void write(const fs::path& dir) const {
        std::ofstream out(dir / "run.txt", std::ios::trunc);
        if (!out) throw Error("cannot write manifest in '" + dir.string() + "'");
        out << "command = " << m_command << "\n";
        for (const auto& [flag, value] : m_entries) out << flag.substr(2) << " = " << value << "\n";
        out << "replay = degfuse " << m_command;
        for (const auto& [flag, value] : m_entries) {
            out << " " << flag;
            if (!value.empty()) out << " " << shell_quote(value);
        }
        out << "\n";
    }

private:
    std::string m_command;
    std::vector<std::pair<std::string, std::string>> m_entries;
};

fs::path prepare_out_dir(const Globals& g) {
    const fs::path dir(g.out_dir);
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------- degrade

struct DegradeOptions {
    std::string input;
    std::string op = "id";
    double sigma = 0.0;
    std::string out = "degraded.pgm";
    int maxval = 255;
};

int cmd_degrade(const Globals& g, const DegradeOptions& o) {
    const ImagePlane x = load_pgm(o.input);
    const LinearDegradation a = build_operator(o.op, x.dims());
    SeededRng rng(g.seed);
    const ImagePlane y = gaussian_noise(a.apply(x), o.sigma, rng);
    const fs::path dir = prepare_out_dir(g);
    save_pgm(y, g.out(o.out), o.maxval);

    Manifest m("degrade", g);
    m.add("--in", o.input);
    m.add("--op", to_string(parse_opspec(o.op)));
    m.add("--sigma", o.sigma);
    m.add("--out", o.out);
    m.add("--maxval", std::to_string(o.maxval));
    m.write(dir);
    std::cout << "degrade: " << to_string(x.dims()) << " -> " << to_string(y.dims()) << " written to "
              << g.out(o.out).string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- fusion inputs

struct FusionInputs {
    std::string y1, y2;
    std::string a1 = "id", a2 = "id";
    std::string denoiser = "oracle";
    std::string clean1, clean2;
    double oracle_w1 = 0.5;
    int steps = 3;
    double sigma_y = 0.0;
    double alpha_first = 0.9;
    double alpha_last = 0.3;
    bool normalize = false;

    void add_options(CLI::App* sub) {
        sub->add_option("--y1", y1, "first degraded source (PGM)")->required();
        sub->add_option("--y2", y2, "second degraded source (PGM)")->required();
        sub->add_option("--a1", a1, "degradation of the first source")->capture_default_str();
        sub->add_option("--a2", a2, "degradation of the second source")->capture_default_str();
        sub->add_option("--denoiser", denoiser, "oracle | tiny:<params.bin>")->capture_default_str();
        sub->add_option("--clean1", clean1, "clean first source (oracle denoiser)");
        sub->add_option("--clean2", clean2, "clean second source (oracle denoiser)");
        sub->add_option("--oracle-w1", oracle_w1, "constant weight map of the oracle")->capture_default_str();
        sub->add_option("--sigma-y", sigma_y, "observation noise std")->capture_default_str()->check(
            CLI::NonNegativeNumber);
        sub->add_option("--alpha-first", alpha_first, "alpha_bar at t=1")->capture_default_str();
        sub->add_option("--alpha-last", alpha_last, "alpha_bar at t=T")->capture_default_str();
        sub->add_flag("--normalize", normalize, "divide the x0 estimate by sqrt(alpha_bar)");
    }

    void record(Manifest& m) const {
        m.add("--y1", y1);
        m.add("--y2", y2);
        m.add("--a1", to_string(parse_opspec(a1)));
        m.add("--a2", to_string(parse_opspec(a2)));
        m.add("--denoiser", denoiser);
        if (!clean1.empty()) m.add("--clean1", clean1);
        if (!clean2.empty()) m.add("--clean2", clean2);
        m.add("--oracle-w1", oracle_w1);
        m.add("--sigma-y", sigma_y);
        m.add("--alpha-first", alpha_first);
        m.add("--alpha-last", alpha_last);
        m.add_switch("--normalize", normalize);
    }
};

struct LoadedFusion {
    ImagePlane y1, y2;
    std::unique_ptr<LinearDegradation> a1, a2;
    std::unique_ptr<Denoiser> denoiser;
    /// Sources used for scoring: the clean planes when given, else the pinv restorations.
    ImagePlane ref1, ref2;
};

LoadedFusion load_fusion(const FusionInputs& in) {
    LoadedFusion f;
    f.y1 = load_pgm(in.y1);
    f.y2 = load_pgm(in.y2);
    const OpSpec s1 = parse_opspec(in.a1), s2 = parse_opspec(in.a2);
    const Dims d1 = infer_input_dims(s1, f.y1.dims()), d2 = infer_input_dims(s2, f.y2.dims());
    if (!(d1 == d2)) {
        throw DimensionError("sources imply different clean grids: " + to_string(d1) + " vs " + to_string(d2));
    }
    f.a1 = std::make_unique<LinearDegradation>(build_operator(s1, d1));
    f.a2 = std::make_unique<LinearDegradation>(build_operator(s2, d2));

    if (!in.clean1.empty()) f.ref1 = load_pgm(in.clean1);
    if (!in.clean2.empty()) f.ref2 = load_pgm(in.clean2);
    if (in.denoiser == "oracle") {
        if (f.ref1.empty() || f.ref2.empty()) throw std::invalid_argument("the oracle denoiser needs --clean1 and --clean2");
        require_same_dims(f.ref1.dims(), d1, "--clean1");
        require_same_dims(f.ref2.dims(), d1, "--clean2");
        const ImagePlane xf = lincomb(in.oracle_w1, f.ref1, 1.0 - in.oracle_w1, f.ref2);
        f.denoiser = std::make_unique<OracleDenoiser>(JointState{f.ref1, f.ref2, xf}, in.oracle_w1);
    } else if (in.denoiser.rfind("tiny:", 0) == 0) {
        f.denoiser = std::make_unique<TinyNetDenoiser>(load_params(in.denoiser.substr(5)));
    } else {
        throw std::invalid_argument("unknown denoiser '" + in.denoiser + "' (expected oracle or tiny:<params.bin>)");
    }
    if (f.ref1.empty()) f.ref1 = f.a1->apply_pinv(f.y1);
    if (f.ref2.empty()) f.ref2 = f.a2->apply_pinv(f.y2);
    return f;
}

FusionConfig fusion_config(const FusionInputs& in, std::uint64_t seed, int steps) {
    FusionConfig cfg;
    cfg.steps = steps;
    cfg.alpha_bar_first = in.alpha_first;
    cfg.alpha_bar_last = in.alpha_last;
    cfg.sigma_y = in.sigma_y;
    cfg.ddim_normalize = in.normalize;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------- fuse

struct FuseOptions {
    FusionInputs in;
    std::string out = "fused.pgm";
    std::string trace;
};

void write_trace(const fs::path& dir, const std::vector<StepRecord>& trace) {
    fs::create_directories(dir);
    std::ofstream csv(dir / "trace.csv", std::ios::trunc);
    csv << "t,correction_scale,fusion_residual,mean_w1\n";
    for (const auto& rec : trace) {
        const JointState& c = rec.corrected;
        double residual = 0.0;
        for (std::size_t i = 0; i < c.xf.size(); ++i) {
            residual = std::max(residual, std::abs(c.xf[i] - rec.w1[i] * c.x1[i] - (1.0 - rec.w1[i]) * c.x2[i]));
        }
        csv << rec.t << "," << num(rec.correction_scale) << "," << num(residual) << "," << num(mean(rec.w1)) << "\n";
        const std::string tag = "t" + std::to_string(rec.t);
        save_pgm(c.xf, dir / ("corrected_xf_" + tag + ".pgm"));
        save_pgm(rec.w1, dir / ("w1_" + tag + ".pgm"));
    }
}

int cmd_fuse(const Globals& g, const FuseOptions& o) {
    const LoadedFusion f = load_fusion(o.in);
    FusionConfig cfg = fusion_config(o.in, g.seed, o.in.steps);
    cfg.keep_trace = !o.trace.empty();
    const FusionResult r = run_fusion(f.y1, f.y2, *f.a1, *f.a2, *f.denoiser, cfg);
    const fs::path dir = prepare_out_dir(g);
    save_pgm(r.fused, g.out(o.out));
    if (cfg.keep_trace) write_trace(g.out(o.trace), r.trace);

    Manifest m("fuse", g);
    o.in.record(m);
    m.add("--T", std::to_string(o.in.steps));
    m.add("--out", o.out);
    if (!o.trace.empty()) m.add("--trace", o.trace);
    m.write(dir);
    std::cout << "fuse: T=" << cfg.steps << " fused " << to_string(r.fused.dims()) << " written to "
              << g.out(o.out).string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- train

struct TrainOptions {
    TrainConfig cfg;
    std::string task = "ir_vis";
    std::size_t size = 32;
    std::string out = "params.bin";
    std::string loss_csv = "loss.csv";
};

int cmd_train(const Globals& g, TrainOptions o) {
    o.cfg.seed = g.seed;
    o.cfg.fusion.seed = g.seed;
    o.cfg.dims = {o.size, o.size};
    o.cfg.loss.task = parse_fusion_task(o.task);
    const TrainResult r = train(o.cfg);
    const fs::path dir = prepare_out_dir(g);
    save_params(r.params, g.out(o.out));
    {
        std::ofstream csv(g.out(o.loss_csv), std::ios::trunc);
        if (!csv) throw Error("cannot write '" + g.out(o.loss_csv).string() + "'");
        csv << "step,loss\n";
        for (std::size_t i = 0; i < r.losses.size(); ++i) csv << i << "," << num(r.losses[i]) << "\n";
    }

    Manifest m("train", g);
    m.add("--steps", std::to_string(o.cfg.steps));
    m.add("--batch", std::to_string(o.cfg.batch));
    m.add("--dataset-size", std::to_string(o.cfg.dataset_size));
    m.add("--lr", o.cfg.lr);
    m.add("--head-scale", o.cfg.head_scale);
    m.add("--task", o.task);
    m.add("--lambda", o.cfg.loss.lambda);
    m.add("--gamma", o.cfg.loss.gamma);
    m.add("--phi", o.cfg.loss.phi);
    m.add("--a1", to_string(parse_opspec(o.cfg.a1_spec)));
    m.add("--a2", to_string(parse_opspec(o.cfg.a2_spec)));
    m.add("--noise", o.cfg.noise_sigma);
    m.add("--size", std::to_string(o.size));
    m.add("--T", std::to_string(o.cfg.fusion.steps));
    m.add("--sigma-y", o.cfg.fusion.sigma_y);
    m.add("--alpha-first", o.cfg.fusion.alpha_bar_first);
    m.add("--alpha-last", o.cfg.fusion.alpha_bar_last);
    m.add_switch("--normalize", o.cfg.fusion.ddim_normalize);
    m.add("--out", o.out);
    m.add("--loss-csv", o.loss_csv);
    m.write(dir);

    const std::span<const double> curve(r.losses);
    if (!curve.empty()) {
        const std::size_t w = std::min<std::size_t>(20, curve.size());
        std::cout << "train: " << curve.size() << " steps, smoothed loss " << num(window_mean(curve, 0, w)) << " -> "
                  << num(window_mean(curve, curve.size() - w, w)) << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
    std::string src1, src2;
    std::vector<std::string> fused;
    std::string out = "metrics.csv";
};

int cmd_eval(const Globals& g, const EvalOptions& o) {
    const ImagePlane s1 = load_pgm(o.src1), s2 = load_pgm(o.src2);
    std::ostringstream csv;
    csv << "path,q_mi,q_abf,ssim_src1,ssim_src2\n";
    for (const auto& path : o.fused) {
        const MetricReport r = evaluate_fusion(s1, s2, load_pgm(path));
        csv << path << "," << num(r.q_mi) << "," << num(r.q_abf) << "," << num(r.ssim_src1) << ","
            << num(r.ssim_src2) << "\n";
    }
    const fs::path dir = prepare_out_dir(g);
    std::ofstream(g.out(o.out), std::ios::trunc) << csv.str();
    std::cout << csv.str();

    Manifest m("eval", g);
    m.add("--src1", o.src1);
    m.add("--src2", o.src2);
    for (const auto& f : o.fused) m.add("--fused", f);
    m.add("--out", o.out);
    m.write(dir);
    return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    std::string a1 = "id", a2 = "id";
    std::size_t height = 8, width = 8;
    std::string w1 = "random";
    double tol = 1e-10;
    std::string out = "verify.txt";
};

int cmd_verify(const Globals& g, const VerifyOptions& o) {
    const Dims d{o.height, o.width};
    ImagePlane w1(d);
    if (o.w1 == "random") {
        SeededRng rng(g.seed);
        for (double& v : w1.values()) v = rng.uniform();
    } else {
        std::size_t used = 0;
        const double c = std::stod(o.w1, &used);
        if (used != o.w1.size()) throw std::invalid_argument("--w1 expects a number or 'random'");
        w1 = ImagePlane(d, c);
    }
    const JointOperator j(build_operator(o.a1, d), build_operator(o.a2, d), w1);
    const ConditionReport rep = check_mp_conditions(j, o.tol);

    std::ostringstream text;
    text << "A1 = " << j.a1().describe() << "\nA2 = " << j.a2().describe() << "\nclean grid " << to_string(d)
         << "\n"
         << rep.format();
    const fs::path dir = prepare_out_dir(g);
    std::ofstream(g.out(o.out), std::ios::trunc) << text.str();
    std::cout << text.str();

    Manifest m("verify", g);
    m.add("--a1", to_string(parse_opspec(o.a1)));
    m.add("--a2", to_string(parse_opspec(o.a2)));
    m.add("--height", std::to_string(o.height));
    m.add("--width", std::to_string(o.width));
    m.add("--w1", o.w1);
    m.add("--tol", o.tol);
    m.add("--out", o.out);
    m.write(dir);
    if (!rep.passes(0) || !rep.passes(1)) throw VerificationFailure("generalized-inverse conditions (1)/(2) violated");
    return kOk;
}

// ---------------------------------------------------------------- ablate-t

struct AblateOptions {
    FusionInputs in;
    int t_max = 5;
    int repeat = 3;
    std::string out = "ablate_t.csv";
};

int cmd_ablate_t(const Globals& g, const AblateOptions& o) {
    const LoadedFusion f = load_fusion(o.in);
    std::ostringstream csv;
    csv << "T,q_mi,q_abf,ssim,wall_ms\n";
    for (int steps = 1; steps <= o.t_max; ++steps) {
        const FusionConfig cfg = fusion_config(o.in, g.seed, steps);
        FusionResult r;
        double best_ms = 0.0;
        for (int rep = 0; rep < o.repeat; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            r = run_fusion(f.y1, f.y2, *f.a1, *f.a2, *f.denoiser, cfg);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            best_ms = rep == 0 ? ms : std::min(best_ms, ms);
        }
        const MetricReport q = evaluate_fusion(f.ref1, f.ref2, r.fused);
        char wall[32];
        std::snprintf(wall, sizeof(wall), "%.3f", best_ms);
        csv << steps << "," << num(q.q_mi) << "," << num(q.q_abf) << "," << num(q.ssim()) << "," << wall << "\n";
    }
    const fs::path dir = prepare_out_dir(g);
    std::ofstream(g.out(o.out), std::ios::trunc) << csv.str();
    std::cout << csv.str();

    Manifest m("ablate-t", g);
    o.in.record(m);
    m.add("--t-max", std::to_string(o.t_max));
    m.add("--repeat", std::to_string(o.repeat));
    m.add("--out", o.out);
    m.write(dir);
    return kOk;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"degfuse: degradation-aware diffusion fusion with exact joint projections"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory receiving every output and run.txt")->capture_default_str();

    DegradeOptions deg;
    auto* s_deg = app.add_subcommand("degrade", "simulate y = A x + n");
    s_deg->add_option("--in", deg.input, "clean input (PGM)")->required();
    s_deg->add_option("--op", deg.op, "operator spec, e.g. blur:sigma=1.0+down:s=2")->capture_default_str();
    s_deg->add_option("--sigma", deg.sigma, "noise std")->capture_default_str()->check(CLI::NonNegativeNumber);
    s_deg->add_option("--out", deg.out, "output file")->capture_default_str();
    s_deg->add_option("--maxval", deg.maxval, "255 or 65535")->capture_default_str();

    FuseOptions fuse;
    auto* s_fuse = app.add_subcommand("fuse", "fuse two degraded sources");
    fuse.in.add_options(s_fuse);
    s_fuse->add_option("--T", fuse.in.steps, "sampling steps")->capture_default_str()->check(CLI::PositiveNumber);
    s_fuse->add_option("--out", fuse.out, "fused output (PGM)")->capture_default_str();
    s_fuse->add_option("--trace", fuse.trace, "directory for per-step snapshots");

    TrainOptions tr;
    tr.cfg.fusion.sigma_y = tr.cfg.noise_sigma;
    auto* s_train = app.add_subcommand("train", "train the tiny denoiser on synthetic pairs");
    s_train->add_option("--steps", tr.cfg.steps, "Adam steps")->capture_default_str();
    s_train->add_option("--batch", tr.cfg.batch, "batch size")->capture_default_str();
    s_train->add_option("--dataset-size", tr.cfg.dataset_size, "synthetic pairs")->capture_default_str();
    s_train->add_option("--lr", tr.cfg.lr, "learning rate")->capture_default_str();
    s_train->add_option("--head-scale", tr.cfg.head_scale, "init scale of the output heads")->capture_default_str();
    s_train->add_option("--task", tr.task, "ir_vis | medical")->capture_default_str();
    s_train->add_option("--lambda", tr.cfg.loss.lambda, "fusion loss weight")->capture_default_str();
    s_train->add_option("--gamma", tr.cfg.loss.gamma, "gradient term weight (ir_vis)")->capture_default_str();
    s_train->add_option("--phi", tr.cfg.loss.phi, "SSIM term weight (medical)")->capture_default_str();
    s_train->add_option("--a1", tr.cfg.a1_spec, "degradation of the first source")->capture_default_str();
    s_train->add_option("--a2", tr.cfg.a2_spec, "degradation of the second source")->capture_default_str();
    s_train->add_option("--noise", tr.cfg.noise_sigma, "observation noise std")->capture_default_str();
    s_train->add_option("--size", tr.size, "synthetic image side")->capture_default_str();
    s_train->add_option("--T", tr.cfg.fusion.steps, "sampling steps")->capture_default_str();
    s_train->add_option("--sigma-y", tr.cfg.fusion.sigma_y, "noise level seen by the correction")
        ->capture_default_str();
    s_train->add_option("--alpha-first", tr.cfg.fusion.alpha_bar_first, "alpha_bar at t=1")->capture_default_str();
    s_train->add_option("--alpha-last", tr.cfg.fusion.alpha_bar_last, "alpha_bar at t=T")->capture_default_str();
    s_train->add_flag("--normalize", tr.cfg.fusion.ddim_normalize, "divide the x0 estimate by sqrt(alpha_bar)");
    s_train->add_option("--out", tr.out, "parameter file")->capture_default_str();
    s_train->add_option("--loss-csv", tr.loss_csv, "loss curve")->capture_default_str();

    EvalOptions ev;
    auto* s_eval = app.add_subcommand("eval", "score fused images against their sources");
    s_eval->add_option("--src1", ev.src1, "first source (PGM)")->required();
    s_eval->add_option("--src2", ev.src2, "second source (PGM)")->required();
    s_eval->add_option("--fused", ev.fused, "fused image(s) (PGM)")->required();
    s_eval->add_option("--out", ev.out, "CSV output")->capture_default_str();

    VerifyOptions ver;
    auto* s_ver = app.add_subcommand("verify", "check the generalized-inverse conditions of the joint operator");
    s_ver->add_option("--a1", ver.a1, "first degradation")->capture_default_str();
    s_ver->add_option("--a2", ver.a2, "second degradation")->capture_default_str();
    s_ver->add_option("--height", ver.height, "clean grid height")->capture_default_str();
    s_ver->add_option("--width", ver.width, "clean grid width")->capture_default_str();
    s_ver->add_option("--w1", ver.w1, "constant weight or 'random'")->capture_default_str();
    s_ver->add_option("--tol", ver.tol, "tolerance")->capture_default_str();
    s_ver->add_option("--out", ver.out, "report file")->capture_default_str();

    AblateOptions ab;
    auto* s_ab = app.add_subcommand("ablate-t", "sweep the number of sampling steps");
    ab.in.add_options(s_ab);
    s_ab->add_option("--t-max", ab.t_max, "largest T")->capture_default_str()->check(CLI::PositiveNumber);
    s_ab->add_option("--repeat", ab.repeat, "timing repetitions (minimum kept)")->capture_default_str()->check(
        CLI::PositiveNumber);
    s_ab->add_option("--out", ab.out, "CSV output")->capture_default_str();

    for (auto* sub : {s_deg, s_fuse, s_train, s_eval, s_ver, s_ab}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (s_deg->parsed()) return cmd_degrade(g, deg);
        if (s_fuse->parsed()) return cmd_fuse(g, fuse);
        if (s_train->parsed()) return cmd_train(g, tr);
        if (s_eval->parsed()) return cmd_eval(g, ev);
        if (s_ver->parsed()) return cmd_verify(g, ver);
        if (s_ab->parsed()) return cmd_ablate_t(g, ab);
    } catch (const VerificationFailure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerification;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace degfuse::cli
