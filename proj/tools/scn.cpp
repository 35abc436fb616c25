#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <omp.h>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scn/dataset.hpp"
#include "scn/model_io.hpp"
#include "scn/report.hpp"
#include "scn/rng.hpp"
#include "scn/runcfg.hpp"
#include "scn/selfcheck.hpp"
#include "scn/sgf.hpp"
#include "scn/synth.hpp"
#include "scn/train.hpp"

namespace fs = std::filesystem;
using namespace scn;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<uint64_t> seed_override;
    int threads = 0;
};

RunConfig load_config(const GlobalOpts& g) {
    if (g.config_path.empty()) throw std::runtime_error("--config is required for this command");
    RunConfig cfg = parse_run_config(g.config_path);
    if (g.seed_override) {
        cfg.seed = *g.seed_override;
        cfg.synth.seed = *g.seed_override;
        cfg.net.seed = *g.seed_override;
        cfg.plan.seed = *g.seed_override;
    } else {
        cfg.synth.seed = cfg.seed;
        cfg.net.seed = cfg.seed;
        cfg.plan.seed = cfg.seed;
    }
    return cfg;
}

fs::path resolve(const fs::path& out_dir, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : out_dir / path;
}

std::string event_name(int i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "event_%02d", i);
    return buf;
}

std::vector<EventSeries> load_events(const fs::path& data_dir) {
    if (!fs::exists(data_dir))
        throw std::runtime_error("data directory not found: " + data_dir.string());
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(data_dir))
        if (entry.is_directory() && fs::exists(entry.path() / "manifest.txt"))
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty()) throw std::runtime_error("no event directories in " + data_dir.string());
    std::vector<EventSeries> events;
    events.reserve(dirs.size());
    for (const fs::path& d : dirs) events.push_back(load_series(d));
    return events;
}

// All sample refs of all events, with ids, in event order.
std::pair<std::vector<SampleRef>, std::vector<std::string>> all_refs(
    const std::vector<EventSeries>& events) {
    std::vector<SampleRef> refs;
    std::vector<std::string> ids;
    for (size_t e = 0; e < events.size(); ++e) {
        ids.push_back(events[e].id);
        std::vector<SampleRef> r = build_sample_refs(events[e], static_cast<int32_t>(e));
        refs.insert(refs.end(), r.begin(), r.end());
    }
    return {refs, ids};
}

std::vector<SampleRef> gather(const std::vector<SampleRef>& refs, const std::vector<size_t>& idx) {
    std::vector<SampleRef> out;
    out.reserve(idx.size());
    for (size_t i : idx) out.push_back(refs[i]);
    return out;
}

// Deterministic cap on the eval set used during training.
std::vector<SampleRef> cap_refs(std::vector<SampleRef> refs, int64_t limit, uint64_t seed) {
    if (limit <= 0 || static_cast<int64_t>(refs.size()) <= limit) return refs;
    Rng rng(derive_seed(seed, 0xE7A1));
    rng.shuffle(refs);
    refs.resize(static_cast<size_t>(limit));
    return refs;
}

int cmd_gen(const GlobalOpts& g) {
    const RunConfig cfg = load_config(g);
    if (cfg.synth.n_frames < 4)
        throw std::runtime_error("gen: synth.n_frames must be >= 4 (needed for diffs and labels)");
    const fs::path data_dir = resolve(g.out_dir, cfg.data_dir);
    fs::create_directories(data_dir);

    OutputTracker tracker;
    for (int e = 0; e < cfg.n_events; ++e) {
        SynthParams params = cfg.synth;
        params.seed = derive_seed(cfg.seed, static_cast<uint64_t>(e));
        const std::string id = event_name(e);
        EventSeries series = synth_event(cfg.grid, params, id);
        const fs::path dir = tracker.track(data_dir / id);
        write_series(series, dir);

        const std::vector<SampleRef> refs = build_sample_refs(series);
        std::ofstream manifest(dir / "samples.csv", std::ios::trunc);
        int64_t positives = 0;
        for (const SampleRef& r : refs) {
            manifest << manifest_line(series, r) << '\n';
            positives += r.label;
        }
        if (!manifest) throw std::runtime_error("gen: I/O failure writing samples.csv");
        const double rate = static_cast<double>(positives) / static_cast<double>(refs.size());
        std::printf("%s: frames=%d samples=%zu positives=%lld base_rate=%.4f\n", id.c_str(),
                    cfg.synth.n_frames, refs.size(), static_cast<long long>(positives), rate);
    }
    tracker.commit();
    return 0;
}

void print_eval_line(const std::string& tag, const EvalResult& ev) {
    std::printf("%s: loss=%.4f csi=%s pod=%s far=%s (h=%lld m=%lld f=%lld cn=%lld)\n", tag.c_str(),
                ev.loss, format_score(ev.csi).c_str(), format_score(ev.pod).c_str(),
                format_score(ev.far).c_str(), static_cast<long long>(ev.table.hits),
                static_cast<long long>(ev.table.misses),
                static_cast<long long>(ev.table.false_alarms),
                static_cast<long long>(ev.table.correct_nulls));
}

int cmd_train(const GlobalOpts& g) {
    const RunConfig cfg = load_config(g);
    const fs::path data_dir = resolve(g.out_dir, cfg.data_dir);
    const fs::path model_path = resolve(g.out_dir, cfg.model_path);
    const std::vector<EventSeries> events = load_events(data_dir);
    auto [refs, ids] = all_refs(events);

    OutputTracker tracker;
    fs::create_directories(g.out_dir);

    if (cfg.plan.mode == SplitPlan::Mode::EventHoldout) {
        const FoldSplit fold =
            holdout_split(refs, ids, cfg.plan.train_events, cfg.plan.test_events);
        if (fold.train.empty() || fold.test.empty())
            throw std::runtime_error("train: empty train or test partition");
        const std::vector<SampleRef> train_refs = gather(refs, fold.train);
        std::vector<SampleRef> eval_refs =
            cap_refs(gather(refs, fold.test), cfg.eval_limit, cfg.seed);

        const NormStats stats = fit_norm(events, train_refs);
        LazySampleSet train_set(events, train_refs, stats);
        LazySampleSet eval_set(events, eval_refs, stats);

        auto [model, history] = train(train_set, eval_set, cfg.net);
        model.norm_stats = stats;
        save_model(model, tracker.track(model_path));
        write_history_csv(tracker.track(g.out_dir / fs::path("history.csv")), history);
        const EvalResult final_ev = evaluate(model, eval_set, cfg.threshold);
        print_eval_line("holdout eval (best checkpoint)", final_ev);
        tracker.commit();
        return 0;
    }

    // K-fold over the pooled, shuffled sample set.
    const std::vector<FoldSplit> folds = kfold_split(refs.size(), cfg.plan.k, cfg.plan.seed);
    std::vector<double> csis, pods, fars;
    for (size_t f = 0; f < folds.size(); ++f) {
        const std::vector<SampleRef> train_refs = gather(refs, folds[f].train);
        std::vector<SampleRef> eval_refs =
            cap_refs(gather(refs, folds[f].test), cfg.eval_limit, cfg.seed);
        const NormStats stats = fit_norm(events, train_refs);
        LazySampleSet train_set(events, train_refs, stats);
        LazySampleSet eval_set(events, eval_refs, stats);

        ScnConfig net = cfg.net;
        net.seed = derive_seed(cfg.net.seed, 1000 + f);
        auto [model, history] = train(train_set, eval_set, net);
        model.norm_stats = stats;

        fs::path fold_model = model_path;
        fold_model.replace_filename(model_path.stem().string() + "_fold" + std::to_string(f) +
                                    model_path.extension().string());
        save_model(model, tracker.track(fold_model));
        write_history_csv(
            tracker.track(g.out_dir / fs::path("history_fold" + std::to_string(f) + ".csv")),
            history);

        LazySampleSet test_set(events, gather(refs, folds[f].test), stats);
        const EvalResult ev = evaluate(model, test_set, cfg.threshold);
        print_eval_line("fold " + std::to_string(f), ev);
        if (ev.csi) csis.push_back(*ev.csi);
        if (ev.pod) pods.push_back(*ev.pod);
        if (ev.far) fars.push_back(*ev.far);
    }

    auto mean_sigma = [](const std::vector<double>& v) {
        if (v.empty()) return std::pair<double, double>(NAN, NAN);
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s2 = 0;
        for (double x : v) s2 += (x - m) * (x - m);
        return std::pair<double, double>(m, std::sqrt(s2 / static_cast<double>(v.size())));
    };
    std::ofstream summary(tracker.track(g.out_dir / fs::path("cv_summary.csv")));
    summary << "metric,mean,sigma\n";
    const std::pair<std::string, std::vector<double>*> rows[] = {
        {"csi", &csis}, {"pod", &pods}, {"far", &fars}};
    for (const auto& [name, vals] : rows) {
        const auto [m, s] = mean_sigma(*vals);
        summary << name << ',' << m << ',' << s << '\n';
        std::printf("%s = %.4f (+/- %.4f)\n", name.c_str(), m, s);
    }
    if (!summary) throw std::runtime_error("train: I/O failure writing cv_summary.csv");
    tracker.commit();
    return 0;
}

int cmd_eval(const GlobalOpts& g) {
    const RunConfig cfg = load_config(g);
    const fs::path data_dir = resolve(g.out_dir, cfg.data_dir);
    const ScnModel model = load_model(resolve(g.out_dir, cfg.model_path));
    std::vector<EventSeries> events = load_events(data_dir);

    // Holdout plans score their held-out events; otherwise every event.
    if (cfg.plan.mode == SplitPlan::Mode::EventHoldout && !cfg.plan.test_events.empty()) {
        std::vector<EventSeries> kept;
        for (EventSeries& e : events)
            if (std::find(cfg.plan.test_events.begin(), cfg.plan.test_events.end(), e.id) !=
                cfg.plan.test_events.end())
                kept.push_back(std::move(e));
        if (kept.empty()) throw std::runtime_error("eval: no test events found on disk");
        events = std::move(kept);
    }

    OutputTracker tracker;
    fs::create_directories(g.out_dir);

    std::vector<EventScore> rows;
    std::vector<double> pooled_probs;
    std::vector<uint8_t> pooled_truth;

    for (size_t e = 0; e < events.size(); ++e) {
        const EventSeries& series = events[e];
        std::vector<SampleRef> refs = build_sample_refs(series, static_cast<int32_t>(e));
        LazySampleSet set(events, refs, model.norm_stats);

        std::vector<double> probs;
        const EvalResult ev = evaluate(model, set, cfg.threshold, &probs);

        std::vector<uint8_t> truth(refs.size());
        for (size_t i = 0; i < refs.size(); ++i) truth[i] = refs[i].label;

        EventScore row;
        row.event = series.id;
        row.table = ev.table;
        row.pod = ev.pod;
        row.far = ev.far;
        row.csi = ev.csi;

        bool has_pos = false, has_neg = false;
        for (uint8_t t : truth) (t ? has_pos : has_neg) = true;
        if (has_pos && has_neg) {
            const RocCurve curve = roc(probs, truth);
            row.auc = curve.auc;
            write_roc_csv(tracker.track(g.out_dir / fs::path("roc_" + series.id + ".csv")), curve);
        }
        rows.push_back(row);

        // Per-issue-time skill series.
        std::map<int64_t, ContingencyTable> by_time;
        for (size_t i = 0; i < refs.size(); ++i) {
            ContingencyTable& t = by_time[series.frames[refs[i].time_idx].timestamp];
            const bool pred = probs[i] > cfg.threshold;
            const bool obs = truth[i] != 0;
            if (pred && obs) ++t.hits;
            else if (!pred && obs) ++t.misses;
            else if (pred && !obs) ++t.false_alarms;
            else ++t.correct_nulls;
        }
        std::vector<std::pair<int64_t, ContingencyTable>> tables(by_time.begin(), by_time.end());
        write_series_csv(tracker.track(g.out_dir / fs::path("series_" + series.id + ".csv")),
                         skill_series(tables));

        pooled_probs.insert(pooled_probs.end(), probs.begin(), probs.end());
        pooled_truth.insert(pooled_truth.end(), truth.begin(), truth.end());

        std::printf("%s: csi=%s pod=%s far=%s auc=%s\n", series.id.c_str(),
                    format_score(row.csi).c_str(), format_score(row.pod).c_str(),
                    format_score(row.far).c_str(),
                    row.auc ? std::to_string(*row.auc).c_str() : "nan");
    }

    // Pooled row over all scored events.
    EventScore all;
    all.event = "ALL";
    for (const EventScore& r : rows) all.table += r.table;
    all.pod = pod(all.table);
    all.far = far(all.table);
    all.csi = csi(all.table);
    bool has_pos = false, has_neg = false;
    for (uint8_t t : pooled_truth) (t ? has_pos : has_neg) = true;
    if (has_pos && has_neg) {
        const RocCurve curve = roc(pooled_probs, pooled_truth);
        all.auc = curve.auc;
        write_roc_csv(tracker.track(g.out_dir / fs::path("roc.csv")), curve);
        std::printf("ALL: csi=%s auc=%.6f\n", format_score(all.csi).c_str(), curve.auc);
    }
    rows.push_back(all);
    write_scores_csv(tracker.track(g.out_dir / fs::path("scores.csv")), rows);
    tracker.commit();
    return 0;
}

int cmd_predict_grid(const GlobalOpts& g, const std::string& event_id, int64_t issue_time) {
    const RunConfig cfg = load_config(g);
    const fs::path data_dir = resolve(g.out_dir, cfg.data_dir);
    const ScnModel model = load_model(resolve(g.out_dir, cfg.model_path));

    const EventSeries series = load_series(data_dir / event_id);
    int t = -1;
    for (size_t i = 0; i < series.frames.size(); ++i)
        if (series.frames[i].timestamp == issue_time) t = static_cast<int>(i);
    if (t < 0) throw std::runtime_error("predict-grid: no frame at timestamp " +
                                        std::to_string(issue_time));
    if (t < 1 || t + 2 >= static_cast<int>(series.frames.size()))
        throw std::runtime_error("predict-grid: issue time lacks a t-15min or t+30min frame");

    std::vector<EventSeries> one;
    one.push_back(series);
    std::vector<SampleRef> refs;
    for (int r = 0; r < series.grid.cell_rows; ++r)
        for (int c = 0; c < series.grid.cell_cols; ++c) {
            SampleRef ref;
            ref.event = 0;
            ref.time_idx = t;
            ref.cell_row = static_cast<int16_t>(r);
            ref.cell_col = static_cast<int16_t>(c);
            ref.label = label_cell(series.frames[t + 2].r, series.grid, r, c);
            refs.push_back(ref);
        }
    LazySampleSet set(one, refs, model.norm_stats);
    std::vector<double> probs;
    evaluate(model, set, cfg.threshold, &probs);

    std::vector<uint8_t> pred(refs.size()), truth(refs.size());
    for (size_t i = 0; i < refs.size(); ++i) {
        pred[i] = probs[i] > cfg.threshold ? 1 : 0;
        truth[i] = refs[i].label;
    }
    const OverlayGrid grid = overlay(pred, truth, series.grid.cell_rows, series.grid.cell_cols);

    OutputTracker tracker;
    fs::create_directories(g.out_dir);
    const std::string stem = event_id + "_" + std::to_string(issue_time);
    std::ofstream pos(tracker.track(g.out_dir / fs::path("pred_" + stem + ".csv")));
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            if (c) pos << ',';
            pos << static_cast<int>(pred[static_cast<size_t>(r) * grid.cols + c]);
        }
        pos << '\n';
    }
    if (!pos) throw std::runtime_error("predict-grid: I/O failure");
    write_overlay_csv(tracker.track(g.out_dir / fs::path("overlay_" + stem + ".csv")), grid);
    write_overlay_pgm(tracker.track(g.out_dir / fs::path("overlay_" + stem + ".pgm")), grid);

    const ContingencyTable h = grid.histogram();
    std::printf("%s @ %lld: hits=%lld misses=%lld false_alarms=%lld correct_nulls=%lld\n",
                event_id.c_str(), static_cast<long long>(issue_time),
                static_cast<long long>(h.hits), static_cast<long long>(h.misses),
                static_cast<long long>(h.false_alarms), static_cast<long long>(h.correct_nulls));
    tracker.commit();
    return 0;
}

int cmd_gradcheck() {
    const GradCheckReport report = run_gradient_checks();
    for (const GradCheckCase& c : report.cases)
        std::printf("%-40s params=%5zu max_rel_err=%.3e\n", c.name.c_str(), c.n_params,
                    c.max_rel_err);
    std::printf("overall max_rel_err=%.3e -> %s\n", report.max_rel_err,
                report.pass() ? "PASS" : "FAIL");
    return report.pass() ? 0 : 1;
}

int cmd_fuse_demo() {
    const FusionReport report = run_fusion_check();
    const bool exact = report.max_abs_diff < 1e-6;
    const bool saves = report.savings >= 0.60;
    std::printf("fused vs conv+pool max_abs_diff=%.3e -> %s\n", report.max_abs_diff,
                exact ? "PASS" : "FAIL");
    std::printf("fused stride-2 MAC savings at 128 maps: %.1f%% -> %s\n", 100.0 * report.savings,
                saves ? "PASS" : "FAIL");
    return exact && saves ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"storm nowcasting pipeline: synthetic events, cube sampling, training, scoring"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "run configuration file");
    app.add_option("--out", g.out_dir, "output directory (all artifacts live here)");
    uint64_t seed_val = 0;
    CLI::Option* seed_opt = app.add_option("--seed", seed_val, "override the config seed");
    app.add_option("--threads", g.threads, "OpenMP thread count (0 = library default)");

    auto* gen = app.add_subcommand("gen", "generate synthetic event series");
    auto* train_cmd = app.add_subcommand("train", "train per the configured split plan");
    auto* eval_cmd = app.add_subcommand("eval", "score a trained model on test events");
    auto* predict = app.add_subcommand("predict-grid", "per-cell forecast + overlay for one time");
    std::string pg_event;
    int64_t pg_time = 0;
    predict->add_option("--event", pg_event, "event id")->required();
    predict->add_option("--time", pg_time, "issue timestamp (seconds)")->required();
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient verification");
    auto* fuse = app.add_subcommand("fuse-demo", "conv+pool fusion exactness and cost report");

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt) g.seed_override = seed_val;
    if (g.threads > 0) omp_set_num_threads(g.threads);

    try {
        if (gen->parsed()) return cmd_gen(g);
        if (train_cmd->parsed()) return cmd_train(g);
        if (eval_cmd->parsed()) return cmd_eval(g);
        if (predict->parsed()) return cmd_predict_grid(g, pg_event, pg_time);
        if (gradcheck->parsed()) return cmd_gradcheck();
        if (fuse->parsed()) return cmd_fuse_demo();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
