#ifndef LSUSS_IO_HPP
#define LSUSS_IO_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lsuss/common.hpp"
#include "lsuss/core.hpp"
#include "lsuss/extract.hpp"

namespace lsuss {

enum class Split { train, val, test };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

struct LabeledSeries {
  TimeSeries series;
  ChangePointSet change_points;
  Split split = Split::train;
  std::string subject_id;
  bool missing_labels = false;
};

namespace detail {

inline double parse_cell(const std::string& cell, const std::string& path, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
    if (pos != cell.size()) throw std::invalid_argument(cell);
    if (!std::isfinite(v)) throw data_error("");
    return v;
  } catch (const data_error&) {
    throw data_error(path + ":" + std::to_string(line_no) + ": non-finite value '" + cell + "'");
  } catch (const std::exception&) {
    throw data_error(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
  }
}

inline std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, delim)) out.push_back(field);
  return out;
}

inline bool looks_numeric(const std::string& s) {
  try {
    std::size_t pos = 0;
    (void)std::stod(s, &pos);
    return pos > 0;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

struct DelimitedOptions {
  char delimiter = 0;  // 0 = auto-detect comma vs tab
  bool expect_header = false;
};

// Rows are timesteps, columns are channels. A companion "<stem>.cps" file with
// one change-point index per line supplies the ground truth.
inline LabeledSeries load_delimited(const std::string& path, DelimitedOptions opt = {}) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open " + path);
  LabeledSeries out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> rows;
  bool first_data_line = true;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (opt.delimiter == 0) opt.delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
    auto fields = detail::split_fields(line, opt.delimiter);
    if (first_data_line) {
      if (opt.expect_header || !detail::looks_numeric(fields.front())) {
        out.series.channel_names = fields;
        first_data_line = false;
        continue;
      }
      first_data_line = false;
    }
    if (cols == 0)
      cols = fields.size();
    else if (fields.size() != cols)
      throw data_error(path + ":" + std::to_string(line_no) + ": ragged row (expected " +
                       std::to_string(cols) + " fields, got " + std::to_string(fields.size()) +
                       ")");
    std::vector<double> row(cols);
    for (std::size_t c = 0; c < cols; ++c) row[c] = detail::parse_cell(fields[c], path, line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw data_error(path + ": no data rows");
  out.series.data.assign(cols, std::vector<double>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t c = 0; c < cols; ++c) out.series.data[c][t] = rows[t][c];
  out.series.validate();

  const std::filesystem::path p(path);
  const auto cps_path = std::filesystem::path(p).replace_extension(".cps");
  if (std::filesystem::exists(cps_path)) {
    std::ifstream lf(cps_path);
    std::size_t lno = 0;
    const std::size_t n = rows.size();
    while (std::getline(lf, line)) {
      ++lno;
      if (line.empty()) continue;
      long long v;
      try {
        v = std::stoll(line);
      } catch (const std::exception&) {
        throw data_error(cps_path.string() + ":" + std::to_string(lno) + ": bad change-point '" +
                         line + "'");
      }
      if (v <= 0 || v >= static_cast<long long>(n))
        throw data_error(cps_path.string() + ":" + std::to_string(lno) + ": change-point " +
                         std::to_string(v) + " outside (0, " + std::to_string(n) + ")");
      out.change_points.indices.push_back(static_cast<std::size_t>(v));
    }
    std::sort(out.change_points.indices.begin(), out.change_points.indices.end());
  } else {
    out.missing_labels = true;
  }
  out.change_points.source = ExtractorSource::ground_truth;
  out.subject_id = p.stem().string();
  return out;
}

namespace detail {

// Proportional split of sorted subjects following reference counts (a, b, rest).
inline Split split_for(std::size_t rank, std::size_t total, std::size_t ref_train,
                       std::size_t ref_val, std::size_t ref_total) {
  auto portion = [&](std::size_t ref) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(total) *
                                                 static_cast<double>(ref) /
                                                 static_cast<double>(ref_total)));
  };
  std::size_t n_train = std::max<std::size_t>(1, portion(ref_train));
  std::size_t n_val = std::max<std::size_t>(1, portion(ref_val));
  if (n_train + n_val >= total && total >= 2) {
    n_val = 1;
    n_train = total > 2 ? total - 2 : 1;
  }
  if (rank < n_train) return Split::train;
  if (rank < n_train + n_val) return Split::val;
  return Split::test;
}

inline std::vector<std::string> sorted_subdirs(const std::string& root) {
  if (!std::filesystem::is_directory(root)) throw io_error("not a directory: " + root);
  std::vector<std::string> dirs;
  for (const auto& e : std::filesystem::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path().filename().string());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

inline std::vector<std::size_t> transitions(const std::vector<long long>& labels) {
  std::vector<std::size_t> cps;
  for (std::size_t t = 1; t < labels.size(); ++t)
    if (labels[t] != labels[t - 1]) cps.push_back(t);
  return cps;
}

}  // namespace detail

// Layout: root/<subject>/channels.csv (9 columns, rows = timesteps) and
// root/<subject>/activity.csv (one activity id per timestep). Ground truth is
// the set of activity-transition indices. Splits follow the sorted subject
// order with 9/5/16 proportions.
inline std::vector<LabeledSeries> load_uci_har(const std::string& root) {
  auto subjects = detail::sorted_subdirs(root);
  if (subjects.empty()) throw io_error("no subject directories under " + root);
  std::vector<LabeledSeries> out;
  for (std::size_t rank = 0; rank < subjects.size(); ++rank) {
    const auto dir = std::filesystem::path(root) / subjects[rank];
    const auto channels = dir / "channels.csv";
    const auto activity = dir / "activity.csv";
    if (!std::filesystem::exists(channels)) throw io_error("missing file: " + channels.string());
    if (!std::filesystem::exists(activity)) throw io_error("missing file: " + activity.string());
    LabeledSeries ls = load_delimited(channels.string());
    if (ls.series.channels() != 9)
      throw data_error(channels.string() + ": expected 9 channels, got " +
                       std::to_string(ls.series.channels()));
    std::ifstream af(activity);
    std::vector<long long> labels;
    std::string line;
    std::size_t lno = 0;
    while (std::getline(af, line)) {
      ++lno;
      if (line.empty()) continue;
      try {
        labels.push_back(std::stoll(line));
      } catch (const std::exception&) {
        throw data_error(activity.string() + ":" + std::to_string(lno) + ": bad activity label");
      }
    }
    if (labels.size() != ls.series.length())
      throw data_error(activity.string() + ": label count does not match series length");
    ls.change_points.indices = detail::transitions(labels);
    ls.change_points.source = ExtractorSource::ground_truth;
    ls.missing_labels = false;
    ls.subject_id = subjects[rank];
    ls.split = detail::split_for(rank, subjects.size(), 9, 5, 30);
    out.push_back(std::move(ls));
  }
  return out;
}

enum class EmgVariant { artificial, evaluation };

// Layout, artificial: root/<subject>/block_*.csv (10 columns each), blocks
// concatenated in sorted filename order with change-points at the joints.
// Evaluation: root/<subject>/session_*.csv with companion .cps transitions.
inline std::vector<LabeledSeries> load_emg_3dc(const std::string& root, EmgVariant variant) {
  auto subjects = detail::sorted_subdirs(root);
  if (subjects.empty()) throw io_error("no subject directories under " + root);
  std::vector<LabeledSeries> out;
  for (std::size_t rank = 0; rank < subjects.size(); ++rank) {
    const auto dir = std::filesystem::path(root) / subjects[rank];
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".csv")
        files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw io_error("no csv files under " + dir.string());
    const Split split = variant == EmgVariant::artificial
                            ? detail::split_for(rank, subjects.size(), 10, 4, 22)
                            : detail::split_for(rank, subjects.size(), 6, 5, 20);
    if (variant == EmgVariant::artificial) {
      LabeledSeries ls;
      std::size_t offset = 0;
      for (const auto& f : files) {
        LabeledSeries block = load_delimited(f);
        if (block.series.channels() != 10)
          throw data_error(f + ": expected 10 channels, got " +
                           std::to_string(block.series.channels()));
        if (ls.series.data.empty()) {
          ls.series.data.assign(10, {});
        } else {
          ls.change_points.indices.push_back(offset);
        }
        for (std::size_t c = 0; c < 10; ++c)
          ls.series.data[c].insert(ls.series.data[c].end(), block.series.data[c].begin(),
                                   block.series.data[c].end());
        offset += block.series.length();
      }
      ls.series.validate();
      ls.change_points.source = ExtractorSource::ground_truth;
      ls.subject_id = subjects[rank];
      ls.split = split;
      out.push_back(std::move(ls));
    } else {
      for (const auto& f : files) {
        LabeledSeries ls = load_delimited(f);
        if (ls.series.channels() != 10)
          throw data_error(f + ": expected 10 channels, got " +
                           std::to_string(ls.series.channels()));
        ls.subject_id = subjects[rank];
        ls.split = split;
        out.push_back(std::move(ls));
      }
    }
  }
  return out;
}

// ----- synthetic generation -----

struct SynthSpec {
  std::size_t nc_informative = 3;
  std::size_t nc_noise = 0;
  std::size_t nc_redundant = 0;
  std::size_t regime_count = 2;
  std::size_t regime_len_lo = 500;
  std::size_t regime_len_hi = 500;
  double noise_level = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (regime_count < 2) throw invalid_argument_error("need at least 2 regimes");
    if (regime_len_lo < 1 || regime_len_hi < regime_len_lo)
      throw invalid_argument_error("bad regime length range");
    if (nc_informative < 1) throw invalid_argument_error("need at least 1 informative channel");
  }
};

// Informative channels switch sinusoid parameters at regime boundaries; noise
// channels are regime-independent; redundant channels copy an informative
// channel plus fresh noise. Ground truth is the boundary index set.
inline LabeledSeries generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::size_t> len_dist(spec.regime_len_lo, spec.regime_len_hi);
  std::vector<std::size_t> lengths(spec.regime_count);
  for (auto& l : lengths) l = len_dist(rng);
  std::size_t n = 0;
  for (auto l : lengths) n += l;

  LabeledSeries out;
  out.change_points.source = ExtractorSource::ground_truth;
  std::size_t acc = 0;
  for (std::size_t r = 0; r + 1 < spec.regime_count; ++r) {
    acc += lengths[r];
    out.change_points.indices.push_back(acc);
  }

  const std::size_t nc = spec.nc_informative + spec.nc_redundant + spec.nc_noise;
  out.series.data.assign(nc, std::vector<double>(n, 0.0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  // adjacent regimes alternate between separated frequency bands so that
  // window shapes differ across every boundary even after z-normalization
  std::uniform_real_distribution<double> slow_dist(0.25, 0.35);
  std::uniform_real_distribution<double> fast_dist(0.7, 1.0);
  std::uniform_real_distribution<double> amp_dist(0.5, 2.0);
  std::uniform_real_distribution<double> phase_dist(0.0, 6.283185307179586);

  for (std::size_t c = 0; c < spec.nc_informative; ++c) {
    std::size_t t0 = 0;
    for (std::size_t r = 0; r < spec.regime_count; ++r) {
      const double freq = r % 2 == 0 ? slow_dist(rng) : fast_dist(rng);
      const double amp = amp_dist(rng), phase = phase_dist(rng);
      for (std::size_t t = 0; t < lengths[r]; ++t)
        out.series.data[c][t0 + t] =
            amp * std::sin(freq * static_cast<double>(t) + phase) + spec.noise_level * gauss(rng);
      t0 += lengths[r];
    }
  }
  for (std::size_t k = 0; k < spec.nc_redundant; ++k) {
    const std::size_t c = spec.nc_informative + k;
    const std::size_t src = k % spec.nc_informative;
    for (std::size_t t = 0; t < n; ++t)
      out.series.data[c][t] = out.series.data[src][t] + spec.noise_level * gauss(rng);
  }
  for (std::size_t k = 0; k < spec.nc_noise; ++k) {
    const std::size_t c = spec.nc_informative + spec.nc_redundant + k;
    for (std::size_t t = 0; t < n; ++t) out.series.data[c][t] = gauss(rng);
  }
  out.series.validate();
  out.subject_id = "synthetic-" + std::to_string(spec.seed);
  return out;
}

// ----- serialization -----

namespace detail {

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

// Two-column CSV (index,value) with 17 significant digits: lossless for f64.
inline void write_curve(const std::string& path, const std::vector<double>& values) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    f << i << ',' << detail::format_double(values[i]) << '\n';
  if (!f) throw io_error("write failed: " + path);
}

inline std::vector<double> read_curve(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot open " + path);
  std::string line;
  std::getline(f, line);  // header
  std::vector<double> values;
  std::size_t lno = 1;
  while (std::getline(f, line)) {
    ++lno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw data_error(path + ":" + std::to_string(lno));
    values.push_back(detail::parse_cell(line.substr(comma + 1), path, lno));
  }
  return values;
}

struct ResultRecord {
  std::string config;
  std::string metric;
  double value = 0.0;
  std::vector<std::array<double, 3>> pairing;  // (gt, pred, |delta|); pred < 0 = unmatched
};

inline void write_results(const std::string& path, const std::vector<ResultRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json rec;
    rec["config"] = r.config;
    rec["metric"] = r.metric;
    rec["value"] = r.value;
    nlohmann::ordered_json pairing = nlohmann::ordered_json::array();
    for (const auto& p : r.pairing) pairing.push_back({p[0], p[1], p[2]});
    rec["pairing"] = pairing;
    arr.push_back(rec);
  }
  std::ofstream f(path);
  if (!f) throw io_error("cannot open " + path + " for writing");
  f << arr.dump(2) << '\n';
  if (!f) throw io_error("write failed: " + path);
}

inline void write_change_points(const std::string& path, const ChangePointSet& cps) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open " + path + " for writing");
  for (std::size_t i : cps.indices) f << i << '\n';
  if (!f) throw io_error("write failed: " + path);
}

inline void write_series_delimited(const std::string& path, const LabeledSeries& ls) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot open " + path + " for writing");
  const std::size_t n = ls.series.length();
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t c = 0; c < ls.series.channels(); ++c) {
      if (c) f << ',';
      f << detail::format_double(ls.series.data[c][t]);
    }
    f << '\n';
  }
  if (!f) throw io_error("write failed: " + path);
  const auto cps_path = std::filesystem::path(path).replace_extension(".cps");
  write_change_points(cps_path.string(), ls.change_points);
}

}  // namespace lsuss

#endif
