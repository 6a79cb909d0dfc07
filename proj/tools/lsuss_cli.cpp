// Command-line front end: train autoencoders, segment series offline, stream
// online, evaluate predictions, grid-search configurations, and generate
// synthetic fixtures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsuss/pipeline.hpp"

namespace {

using nlohmann::ordered_json;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = unset, fall back to LSUSS_THREADS then 1
};

void apply_threads(const GlobalOpts& g) {
  std::size_t n = g.threads;
  if (n == 0) {
    if (const char* env = std::getenv("LSUSS_THREADS")) n = std::strtoull(env, nullptr, 10);
  }
  lsuss::set_thread_budget(n == 0 ? 1 : n);
}

void echo_config(const std::string& command, const ordered_json& resolved) {
  ordered_json j;
  j["command"] = command;
  j["config"] = resolved;
  std::cout << "config: " << j.dump() << "\n";
}

std::vector<lsuss::LabeledSeries> load_dataset(const std::string& path, const std::string& format) {
  if (format == "delimited") {
    std::vector<lsuss::LabeledSeries> out;
    if (std::filesystem::is_directory(path)) {
      std::vector<std::string> files;
      for (const auto& e : std::filesystem::directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) out.push_back(lsuss::load_delimited(f));
      if (out.empty()) throw lsuss::io_error("no .csv files under " + path);
    } else {
      out.push_back(lsuss::load_delimited(path));
    }
    return out;
  }
  if (format == "uci") return lsuss::load_uci_har(path);
  if (format == "emg-art") return lsuss::load_emg_3dc(path, lsuss::EmgVariant::artificial);
  if (format == "emg-eval") return lsuss::load_emg_3dc(path, lsuss::EmgVariant::evaluation);
  throw lsuss::invalid_config_error("unknown format: " + format);
}

std::vector<std::vector<double>> training_windows(const std::vector<lsuss::LabeledSeries>& data,
                                                  lsuss::ScalerKind scaler, std::size_t nw,
                                                  std::size_t stride) {
  std::vector<const lsuss::LabeledSeries*> pool;
  for (const auto& ls : data)
    if (ls.split == lsuss::Split::train) pool.push_back(&ls);
  if (pool.empty())
    for (const auto& ls : data) pool.push_back(&ls);
  std::vector<std::vector<double>> windows;
  for (const auto* ls : pool) {
    lsuss::TimeSeries scaled =
        scaler == lsuss::ScalerKind::none
            ? ls->series
            : lsuss::apply_scaler(lsuss::fit_scaler(scaler, ls->series), ls->series);
    if (scaled.length() < nw) continue;
    const auto subs = lsuss::window_all(scaled, nw, stride);
    for (std::size_t i = 0; i < subs.count(); ++i) {
      const auto w = subs.window(i);
      std::vector<double> flat;
      flat.reserve(nw * w.size());
      for (const auto& ch : w) flat.insert(flat.end(), ch.begin(), ch.end());
      windows.push_back(std::move(flat));
    }
  }
  if (windows.empty()) throw lsuss::insufficient_data_error("no training windows available");
  return windows;
}

lsuss::ChangePointSet read_cps_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw lsuss::io_error("cannot open " + path);
  lsuss::ChangePointSet out;
  std::string line;
  std::size_t lno = 0;
  while (std::getline(f, line)) {
    ++lno;
    if (line.empty()) continue;
    try {
      const long long v = std::stoll(line);
      if (v < 0) throw std::invalid_argument(line);
      out.indices.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw lsuss::data_error(path + ":" + std::to_string(lno) + ": bad change-point index");
    }
  }
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"LS-USS change-point detection toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "worker thread cap (env LSUSS_THREADS as fallback)");

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train an autoencoder and write a model file");
  std::string tr_data, tr_format = "delimited", tr_arch = "fc", tr_scaler = "none", tr_out;
  std::size_t tr_nw = 100, tr_stride = 0;
  lsuss::TrainConfig tr_cfg;
  train_cmd->add_option("--data", tr_data, "dataset file or directory")->required();
  train_cmd->add_option("--format", tr_format, "delimited|uci|emg-art|emg-eval")
      ->capture_default_str();
  train_cmd->add_option("--arch", tr_arch, "fc|conv")->capture_default_str();
  train_cmd->add_option("--nw", tr_nw, "window length")->capture_default_str();
  train_cmd->add_option("--scaler", tr_scaler, "none|standard|minmax|robust")
      ->capture_default_str();
  train_cmd->add_option("--stride", tr_stride, "training window stride (default nw/2)");
  train_cmd->add_option("--epochs", tr_cfg.max_epochs, "max epochs")->capture_default_str();
  train_cmd->add_option("--batch", tr_cfg.batch_size, "mini-batch size")->capture_default_str();
  train_cmd->add_option("--lr", tr_cfg.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--patience", tr_cfg.patience, "early-stop patience")
      ->capture_default_str();
  train_cmd->add_option("--val-fraction", tr_cfg.val_fraction, "validation fraction")
      ->capture_default_str();
  train_cmd->add_option("--out", tr_out, "output model path")->required();

  // ---- segment ----
  auto* seg_cmd = app.add_subcommand("segment", "offline segmentation of one series");
  std::string sg_data, sg_algorithm = "fluss", sg_scaler = "none", sg_model, sg_out_cps,
              sg_out_curve;
  std::size_t sg_nw = 100, sg_step = 1, sg_local_window = 0;
  std::optional<std::size_t> sg_tc, sg_k, sg_tlim;
  bool sg_local = false;
  double sg_threshold = -1.0;
  seg_cmd->add_option("--data", sg_data, "delimited series file")->required();
  seg_cmd->add_option("--algorithm", sg_algorithm, "fluss|floss|lfmd|lsuss")
      ->capture_default_str();
  seg_cmd->add_option("--nw", sg_nw, "window length")->capture_default_str();
  seg_cmd->add_option("--tc", sg_tc, "temporal constraint");
  seg_cmd->add_option("--k", sg_k, "change-point count (REA/LREA); absent = LTEA");
  seg_cmd->add_flag("--local", sg_local, "use the locally scaled extractor (LREA)");
  seg_cmd->add_option("--threshold", sg_threshold, "LTEA threshold")->capture_default_str();
  seg_cmd->add_option("--scaler", sg_scaler, "none|standard|minmax|robust")
      ->capture_default_str();
  seg_cmd->add_option("--model", sg_model, "model file (lfmd/lsuss)");
  seg_cmd->add_option("--step", sg_step, "window step (lfmd)")->capture_default_str();
  seg_cmd->add_option("--t-lim", sg_tlim, "batched collapse memory bound");
  seg_cmd->add_option("--local-window", sg_local_window, "rolling scaling half-width");
  seg_cmd->add_option("--out-cps", sg_out_cps, "change-point output file");
  seg_cmd->add_option("--out-curve", sg_out_curve, "curve output file (CSV)");

  // ---- stream ----
  auto* st_cmd = app.add_subcommand("stream", "replay a series as a stream (online LS-USS)");
  std::string st_data, st_scaler = "none", st_model, st_out_cps;
  std::size_t st_nw = 100, st_eps = 1, st_local_window = 0;
  std::optional<std::size_t> st_tc;
  double st_threshold = -1.0;
  st_cmd->add_option("--data", st_data, "delimited series file")->required();
  st_cmd->add_option("--nw", st_nw, "window length")->capture_default_str();
  st_cmd->add_option("--tc", st_tc, "temporal constraint")->required();
  st_cmd->add_option("--threshold", st_threshold, "LTEA threshold")->capture_default_str();
  st_cmd->add_option("--scaler", st_scaler, "none|standard|minmax|robust")->capture_default_str();
  st_cmd->add_option("--model", st_model, "model file")->required();
  st_cmd->add_option("--epsilon-batch", st_eps, "samples accumulated per online append")
      ->capture_default_str();
  st_cmd->add_option("--local-window", st_local_window, "rolling scaling half-width");
  st_cmd->add_option("--out-cps", st_out_cps, "final emission output file");

  // ---- eval ----
  auto* ev_cmd = app.add_subcommand("eval", "score predictions against ground truth");
  std::string ev_pred, ev_gt, ev_metric = "score_regimes", ev_out;
  std::size_t ev_n = 0;
  bool ev_additive = false;
  ev_cmd->add_option("--pred", ev_pred, "predicted change-points (one index per line)")
      ->required();
  ev_cmd->add_option("--gt", ev_gt, "ground-truth change-points")->required();
  ev_cmd->add_option("--n", ev_n, "series length")->required();
  ev_cmd->add_option("--metric", ev_metric, "score_regimes|mae")->capture_default_str();
  ev_cmd->add_flag("--additive-weight", ev_additive, "use (1+|1-ratio|)*MAE for mae");
  ev_cmd->add_option("--out", ev_out, "also write the result record to this JSON file");

  // ---- gridsearch ----
  auto* gs_cmd = app.add_subcommand("gridsearch", "rank configurations on a validation split");
  std::string gs_data, gs_format = "delimited", gs_algorithm = "lsuss", gs_out;
  std::vector<std::size_t> gs_nws{100}, gs_steps{1};
  std::vector<std::string> gs_scalers{"none"}, gs_archs, gs_extractors{"rea"};
  std::vector<long long> gs_tcs;
  std::vector<double> gs_thresholds{-1.0};
  std::optional<std::size_t> gs_budget;
  lsuss::TrainConfig gs_train_cfg;
  gs_train_cfg.max_epochs = 30;
  gs_cmd->add_option("--data", gs_data, "dataset file or directory")->required();
  gs_cmd->add_option("--format", gs_format, "delimited|uci|emg-art|emg-eval")
      ->capture_default_str();
  gs_cmd->add_option("--algorithm", gs_algorithm, "fluss|floss|lfmd|lsuss|lsuss_online")
      ->capture_default_str();
  gs_cmd->add_option("--nw-list", gs_nws, "window lengths")->delimiter(',');
  gs_cmd->add_option("--tc-list", gs_tcs, "temporal constraints (-1 = none)")->delimiter(',');
  gs_cmd->add_option("--scaler-list", gs_scalers, "scaler kinds")->delimiter(',');
  gs_cmd->add_option("--step-list", gs_steps, "window steps")->delimiter(',');
  gs_cmd->add_option("--arch-list", gs_archs, "architectures (fc|conv); empty = no model")
      ->delimiter(',');
  gs_cmd->add_option("--extractor-list", gs_extractors, "rea|lrea|ltea")->delimiter(',');
  gs_cmd->add_option("--threshold-list", gs_thresholds, "LTEA thresholds")->delimiter(',');
  gs_cmd->add_option("--budget", gs_budget, "max configurations to evaluate");
  gs_cmd->add_option("--epochs", gs_train_cfg.max_epochs, "autoencoder training epochs")
      ->capture_default_str();
  gs_cmd->add_option("--out", gs_out, "ranked results JSON file")->required();

  // ---- synth ----
  auto* sy_cmd = app.add_subcommand("synth", "generate a labeled synthetic series");
  std::string sy_out;
  lsuss::SynthSpec sy_spec;
  sy_cmd->add_option("--nc-informative", sy_spec.nc_informative, "informative channels")
      ->capture_default_str();
  sy_cmd->add_option("--nc-redundant", sy_spec.nc_redundant, "redundant channels")
      ->capture_default_str();
  sy_cmd->add_option("--nc-noise", sy_spec.nc_noise, "pure noise channels")
      ->capture_default_str();
  sy_cmd->add_option("--regimes", sy_spec.regime_count, "regime count")->capture_default_str();
  sy_cmd->add_option("--len-lo", sy_spec.regime_len_lo, "min regime length")
      ->capture_default_str();
  sy_cmd->add_option("--len-hi", sy_spec.regime_len_hi, "max regime length")
      ->capture_default_str();
  sy_cmd->add_option("--noise", sy_spec.noise_level, "noise amplitude")->capture_default_str();
  sy_cmd->add_option("--out", sy_out, "output series file (.cps written alongside)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  apply_threads(g);

  if (*train_cmd) {
    const auto arch = tr_arch == "conv" ? lsuss::AeKind::convolutional
                                        : lsuss::AeKind::fully_connected;
    if (tr_arch != "fc" && tr_arch != "conv")
      throw lsuss::invalid_config_error("unknown arch: " + tr_arch);
    if (arch == lsuss::AeKind::convolutional && tr_nw % 4 != 0)
      throw lsuss::invalid_config_error("convolutional runs require --nw to be a multiple of 4");
    const auto scaler = lsuss::scaler_kind_from_string(tr_scaler);
    if (tr_stride == 0) tr_stride = std::max<std::size_t>(1, tr_nw / 2);
    tr_cfg.seed = g.seed;
    echo_config("train", {{"data", tr_data},
                          {"format", tr_format},
                          {"arch", tr_arch},
                          {"nw", tr_nw},
                          {"scaler", tr_scaler},
                          {"stride", tr_stride},
                          {"epochs", tr_cfg.max_epochs},
                          {"batch", tr_cfg.batch_size},
                          {"lr", tr_cfg.learning_rate},
                          {"patience", tr_cfg.patience},
                          {"val_fraction", tr_cfg.val_fraction},
                          {"seed", g.seed},
                          {"out", tr_out}});
    const auto data = load_dataset(tr_data, tr_format);
    const std::size_t nc = data.front().series.channels();
    auto windows = training_windows(data, scaler, tr_nw, tr_stride);
    lsuss::AeModel model = lsuss::make_model(lsuss::build_arch(arch, nc, tr_nw), g.seed);
    const auto rep = lsuss::train(model, windows, tr_cfg);
    lsuss::save_model(model, tr_out);
    std::cout << "train_loss: " << rep.final_train_loss << "\n";
    std::cout << "val_loss: " << rep.best_val_loss << " (initial " << rep.initial_val_loss
              << ", epochs " << rep.epochs_run << ")\n";
    return 0;
  }

  if (*seg_cmd) {
    lsuss::PipelineConfig cfg;
    cfg.algorithm = lsuss::algorithm_from_string(sg_algorithm);
    if (cfg.algorithm == lsuss::Algorithm::lsuss_online)
      throw lsuss::invalid_config_error("use the stream command for online runs");
    cfg.nw = sg_nw;
    cfg.tc = sg_tc;
    cfg.step = sg_step;
    cfg.scaler = lsuss::scaler_kind_from_string(sg_scaler);
    cfg.k = sg_k;
    cfg.local_extract = sg_local;
    cfg.threshold = sg_threshold;
    cfg.local_window = sg_local_window;
    cfg.t_lim = sg_tlim;
    cfg.seed = g.seed;
    echo_config("segment",
                {{"data", sg_data},
                 {"algorithm", sg_algorithm},
                 {"nw", sg_nw},
                 {"tc", sg_tc ? ordered_json(*sg_tc) : ordered_json(nullptr)},
                 {"k", sg_k ? ordered_json(*sg_k) : ordered_json(nullptr)},
                 {"extractor", sg_k ? (sg_local ? "lrea" : "rea") : "ltea"},
                 {"threshold", sg_threshold},
                 {"scaler", sg_scaler},
                 {"model", sg_model},
                 {"step", sg_step},
                 {"t_lim", sg_tlim ? ordered_json(*sg_tlim) : ordered_json(nullptr)},
                 {"seed", g.seed}});
    const auto ls = lsuss::load_delimited(sg_data);
    std::optional<lsuss::AeModel> model;
    const bool needs_model = cfg.algorithm == lsuss::Algorithm::lfmd ||
                             cfg.algorithm == lsuss::Algorithm::lsuss;
    if (needs_model) {
      if (sg_model.empty())
        throw lsuss::invalid_config_error(sg_algorithm + " requires --model");
      model = lsuss::load_model(sg_model);
    }
    const auto res = lsuss::run_pipeline(ls.series, cfg, model ? &*model : nullptr);
    for (std::size_t i : res.change_points.indices) std::cout << i << "\n";
    if (!sg_out_cps.empty()) lsuss::write_change_points(sg_out_cps, res.change_points);
    if (!sg_out_curve.empty()) lsuss::write_curve(sg_out_curve, res.curve.values);
    return 0;
  }

  if (*st_cmd) {
    lsuss::PipelineConfig cfg;
    cfg.algorithm = lsuss::Algorithm::lsuss_online;
    cfg.nw = st_nw;
    cfg.tc = st_tc;
    cfg.threshold = st_threshold;
    cfg.scaler = lsuss::scaler_kind_from_string(st_scaler);
    cfg.local_window = st_local_window;
    cfg.epsilon_batch = st_eps;
    cfg.seed = g.seed;
    echo_config("stream", {{"data", st_data},
                           {"nw", st_nw},
                           {"tc", *st_tc},
                           {"threshold", st_threshold},
                           {"scaler", st_scaler},
                           {"model", st_model},
                           {"epsilon_batch", st_eps},
                           {"seed", g.seed}});
    const auto ls = lsuss::load_delimited(st_data);
    const auto model = lsuss::load_model(st_model);
    std::optional<lsuss::ScalerParams> scaler;
    if (cfg.scaler != lsuss::ScalerKind::none)
      scaler = lsuss::fit_scaler(cfg.scaler, ls.series);
    lsuss::OnlineLsuss driver(cfg, model, scaler);
    lsuss::ChangePointSet emitted;
    const std::size_t n = ls.series.length();
    for (std::size_t t = 0; t < n; t += st_eps) {
      const std::size_t hi = std::min(n, t + st_eps);
      std::vector<std::vector<double>> cols(ls.series.channels());
      for (std::size_t c = 0; c < ls.series.channels(); ++c)
        cols[c].assign(ls.series.data[c].begin() + static_cast<std::ptrdiff_t>(t),
                       ls.series.data[c].begin() + static_cast<std::ptrdiff_t>(hi));
      for (std::size_t idx : driver.push(cols)) {
        std::cout << idx << " " << hi << "\n";
        emitted.indices.push_back(idx);
      }
    }
    for (std::size_t idx : driver.finish()) {
      std::cout << idx << " " << n << "\n";
      emitted.indices.push_back(idx);
    }
    std::sort(emitted.indices.begin(), emitted.indices.end());
    emitted.source = lsuss::ExtractorSource::ltea;
    if (!st_out_cps.empty()) lsuss::write_change_points(st_out_cps, emitted);
    return 0;
  }

  if (*ev_cmd) {
    echo_config("eval", {{"pred", ev_pred},
                         {"gt", ev_gt},
                         {"n", ev_n},
                         {"metric", ev_metric},
                         {"additive_weight", ev_additive},
                         {"seed", g.seed}});
    const auto pred = read_cps_file(ev_pred);
    const auto gt = read_cps_file(ev_gt);
    lsuss::EvalResult r;
    if (ev_metric == "score_regimes") {
      r = lsuss::score_regimes(pred, gt, ev_n);
    } else if (ev_metric == "mae") {
      r = lsuss::prediction_loss_mae(pred, gt, ev_n, ev_additive);
    } else {
      throw lsuss::invalid_config_error("unknown metric: " + ev_metric);
    }
    ordered_json j;
    j["metric"] = ev_metric;
    j["value"] = r.value;
    j["n_gt"] = r.n_gt;
    j["n_pred"] = r.n_pred;
    std::cout << j.dump() << "\n";
    if (!ev_out.empty()) {
      lsuss::ResultRecord rec;
      rec.config = "pred=" + ev_pred + ",gt=" + ev_gt;
      rec.metric = ev_metric;
      rec.value = r.value;
      for (const auto& p : r.pairing)
        rec.pairing.push_back({static_cast<double>(p.gt),
                               p.pred ? static_cast<double>(*p.pred) : -1.0, p.abs_delta});
      lsuss::write_results(ev_out, {rec});
    }
    return 0;
  }

  if (*gs_cmd) {
    const auto algorithm = lsuss::algorithm_from_string(gs_algorithm);
    lsuss::GridSpec spec;
    spec.seed = g.seed;
    spec.budget = gs_budget;
    spec.nws = gs_nws;
    spec.steps = gs_steps;
    spec.thresholds = gs_thresholds;
    spec.extractors = gs_extractors;
    spec.scalers.clear();
    for (const auto& s : gs_scalers) spec.scalers.push_back(lsuss::scaler_kind_from_string(s));
    if (!gs_tcs.empty()) {
      spec.tcs.clear();
      for (long long t : gs_tcs)
        spec.tcs.push_back(t < 0 ? std::nullopt
                                 : std::optional<std::size_t>(static_cast<std::size_t>(t)));
    }
    if (!gs_archs.empty()) {
      spec.archs.clear();
      for (const auto& a : gs_archs) {
        if (a == "fc") spec.archs.push_back(lsuss::AeKind::fully_connected);
        else if (a == "conv") spec.archs.push_back(lsuss::AeKind::convolutional);
        else if (a == "none") spec.archs.push_back(std::nullopt);
        else throw lsuss::invalid_config_error("unknown arch: " + a);
      }
    } else if (algorithm == lsuss::Algorithm::lfmd || algorithm == lsuss::Algorithm::lsuss ||
               algorithm == lsuss::Algorithm::lsuss_online) {
      spec.archs = {lsuss::AeKind::fully_connected};
    }
    // conv runs only accept nw divisible by 4: round down and note it
    const bool any_conv = std::any_of(spec.archs.begin(), spec.archs.end(), [](const auto& a) {
      return a && *a == lsuss::AeKind::convolutional;
    });
    if (any_conv) {
      for (auto& nw : spec.nws) {
        if (nw % 4 != 0) {
          const std::size_t adj = nw - nw % 4;
          std::cout << "note: nw " << nw << " adjusted to " << adj << " (conv needs nw % 4 == 0)\n";
          nw = adj;
        }
      }
    }
    echo_config("gridsearch", {{"data", gs_data},
                               {"format", gs_format},
                               {"algorithm", gs_algorithm},
                               {"grid_size", spec.cartesian_size()},
                               {"budget", gs_budget ? ordered_json(*gs_budget) : ordered_json(nullptr)},
                               {"seed", g.seed},
                               {"out", gs_out}});
    const auto data = load_dataset(gs_data, gs_format);
    lsuss::GridSearchContext ctx;
    gs_train_cfg.seed = g.seed;
    ctx.train_cfg = gs_train_cfg;
    for (const auto& ls : data) {
      if (ls.split == lsuss::Split::train) ctx.train.push_back(&ls);
      if (ls.split == lsuss::Split::val) ctx.val.push_back(&ls);
    }
    if (ctx.val.empty())
      for (const auto& ls : data) ctx.val.push_back(&ls);
    const auto result = lsuss::grid_search_pipelines(algorithm, spec, ctx);
    std::vector<lsuss::ResultRecord> records;
    for (const auto& e : result.ranked) {
      lsuss::ResultRecord rec;
      rec.config = e.config.key();
      rec.metric = algorithm == lsuss::Algorithm::lsuss_online ? "mae" : "score_regimes";
      rec.value = e.metric;
      records.push_back(std::move(rec));
    }
    lsuss::write_results(gs_out, records);
    std::cout << "evaluated: " << result.runs_evaluated << "\n";
    if (!result.ranked.empty())
      std::cout << "best: " << result.ranked.front().config.key() << " -> "
                << result.ranked.front().metric << "\n";
    return 0;
  }

  if (*sy_cmd) {
    sy_spec.seed = g.seed;
    echo_config("synth", {{"nc_informative", sy_spec.nc_informative},
                          {"nc_redundant", sy_spec.nc_redundant},
                          {"nc_noise", sy_spec.nc_noise},
                          {"regimes", sy_spec.regime_count},
                          {"len_lo", sy_spec.regime_len_lo},
                          {"len_hi", sy_spec.regime_len_hi},
                          {"noise", sy_spec.noise_level},
                          {"seed", g.seed},
                          {"out", sy_out}});
    const auto ls = lsuss::generate_synthetic(sy_spec);
    lsuss::write_series_delimited(sy_out, ls);
    std::cout << "length: " << ls.series.length() << ", change_points: "
              << ls.change_points.indices.size() << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const lsuss::invalid_config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lsuss::invalid_argument_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lsuss::invalid_window_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lsuss::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const lsuss::io_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const lsuss::shape_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const lsuss::insufficient_data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
