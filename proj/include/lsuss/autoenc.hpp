#ifndef LSUSS_AUTOENC_HPP
#define LSUSS_AUTOENC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lsuss/common.hpp"
#include "lsuss/core.hpp"

namespace lsuss {

enum class AeKind : std::uint8_t { fully_connected = 0, convolutional = 1 };
enum class Activation { linear, sigmoid, relu };

struct LayerSpec {
  enum class Type { fc, conv, tconv } type = Type::fc;
  std::size_t in_ch = 1, out_ch = 1;   // fc: feature sizes (len = 1)
  std::size_t in_len = 1, out_len = 1;
  std::size_t kernel = 0, stride = 0, pad = 0, out_pad = 0;
  Activation act = Activation::linear;
  std::ptrdiff_t tied_to = -1;  // encoder layer index whose weights are reused transposed

  std::size_t in_size() const { return in_ch * in_len; }
  std::size_t out_size() const { return out_ch * out_len; }
  std::size_t weight_count() const {
    if (type == Type::fc) return in_ch * out_ch;
    return in_ch * out_ch * kernel;
  }
  std::size_t bias_count() const { return out_ch; }
};

struct AeArchitecture {
  AeKind kind = AeKind::fully_connected;
  std::size_t nc = 0, nw = 0, latent_dim = 0;
  std::vector<LayerSpec> layers;
  std::size_t encoder_layers = 0;
};

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

inline AeArchitecture build_arch(AeKind kind, std::size_t nc, std::size_t nw) {
  if (nc < 1 || nw < 1) throw invalid_argument_error("nc and nw must be positive");
  AeArchitecture a;
  a.kind = kind;
  a.nc = nc;
  a.nw = nw;
  auto fc = [](std::size_t in, std::size_t out, Activation act, std::ptrdiff_t tied = -1) {
    LayerSpec l;
    l.type = LayerSpec::Type::fc;
    l.in_ch = in;
    l.out_ch = out;
    l.act = act;
    l.tied_to = tied;
    return l;
  };
  if (kind == AeKind::fully_connected) {
    const std::size_t d = nc * nw;
    const std::size_t h1 = ceil_div(d, 2), h2 = ceil_div(d, 4);
    const std::size_t latent = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(d)));
    a.latent_dim = std::max<std::size_t>(latent, 1);
    a.layers = {
        fc(d, h1, Activation::sigmoid),
        fc(h1, h2, Activation::sigmoid),
        fc(h2, a.latent_dim, Activation::sigmoid),
        fc(a.latent_dim, h2, Activation::sigmoid, 2),
        fc(h2, h1, Activation::sigmoid, 1),
        fc(h1, d, Activation::linear, 0),
    };
    a.encoder_layers = 3;
    return a;
  }

  if (nw % 4 != 0)
    throw invalid_argument_error("convolutional architecture requires nw divisible by 4");
  const std::size_t L = nc * nw;
  const std::size_t f1 = ceil_div(L, 2), f2 = ceil_div(L, 4), latent = ceil_div(L, 6);
  a.latent_dim = latent;
  auto conv = [](std::size_t ic, std::size_t oc, std::size_t il, std::size_t ol) {
    LayerSpec l;
    l.type = LayerSpec::Type::conv;
    l.in_ch = ic;
    l.out_ch = oc;
    l.in_len = il;
    l.out_len = ol;
    l.kernel = 3;
    l.stride = 2;
    l.pad = 1;
    l.act = Activation::relu;
    return l;
  };
  auto tconv = [](std::size_t ic, std::size_t oc, std::size_t il, std::size_t ol, Activation act) {
    LayerSpec l;
    l.type = LayerSpec::Type::tconv;
    l.in_ch = ic;
    l.out_ch = oc;
    l.in_len = il;
    l.out_len = ol;
    l.kernel = 3;
    l.stride = 2;
    l.pad = 1;
    l.out_pad = 1;
    l.act = act;
    return l;
  };
  a.layers = {
      conv(nc, 2 * nc, nw, nw / 2),
      conv(2 * nc, 4 * nc, nw / 2, nw / 4),
      // conv output (4nc x nw/4) is flattened channel-major to length L here
      fc(L, f1, Activation::relu),
      fc(f1, f2, Activation::relu),
      fc(f2, latent, Activation::relu),
      fc(latent, f2, Activation::relu, 4),
      fc(f2, f1, Activation::relu, 3),
      fc(f1, L, Activation::relu, 2),
      tconv(4 * nc, 2 * nc, nw / 4, nw / 2, Activation::relu),
      tconv(2 * nc, nc, nw / 2, nw, Activation::linear),
  };
  a.encoder_layers = 5;
  return a;
}

struct AeModel {
  AeArchitecture arch;
  std::vector<double> weights;
  std::size_t trained_epochs = 0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;

  struct ParamView {
    std::size_t w_off = 0, w_cnt = 0, b_off = 0, b_cnt = 0;
    bool transposed = false;
  };
  std::vector<ParamView> views;

  std::size_t input_size() const { return arch.nc * arch.nw; }
};

namespace detail {

inline double activate(double x, Activation a) {
  switch (a) {
    case Activation::linear: return x;
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::relu: return x > 0.0 ? x : 0.0;
  }
  return x;
}

// Derivative expressed through the post-activation value.
inline double activate_grad(double y, Activation a) {
  switch (a) {
    case Activation::linear: return 1.0;
    case Activation::sigmoid: return y * (1.0 - y);
    case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

}  // namespace detail

inline AeModel make_model(const AeArchitecture& arch, std::uint64_t seed) {
  AeModel m;
  m.arch = arch;
  m.seed = seed;
  m.views.resize(arch.layers.size());
  std::size_t off = 0;
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& l = arch.layers[i];
    auto& v = m.views[i];
    if (l.tied_to >= 0) {
      v.w_off = m.views[static_cast<std::size_t>(l.tied_to)].w_off;
      v.w_cnt = m.views[static_cast<std::size_t>(l.tied_to)].w_cnt;
      v.transposed = true;
    } else {
      v.w_off = off;
      v.w_cnt = l.weight_count();
      off += v.w_cnt;
    }
    v.b_off = off;
    v.b_cnt = l.bias_count();
    off += v.b_cnt;
  }
  m.weights.assign(off, 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < arch.layers.size(); ++i) {
    const auto& l = arch.layers[i];
    if (l.tied_to >= 0) continue;
    const double bound = 1.0 / std::sqrt(static_cast<double>(l.in_size()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t k = 0; k < m.views[i].w_cnt; ++k) m.weights[m.views[i].w_off + k] = dist(rng);
  }
  return m;
}

namespace detail {

// Forward through one layer; writes post-activation into y.
inline void layer_forward(const AeModel& m, std::size_t li, const std::vector<double>& x,
                          std::vector<double>& y) {
  const auto& l = m.arch.layers[li];
  const auto& v = m.views[li];
  const double* W = m.weights.data() + v.w_off;
  const double* b = m.weights.data() + v.b_off;
  y.assign(l.out_size(), 0.0);
  switch (l.type) {
    case LayerSpec::Type::fc: {
      if (!v.transposed) {
        for (std::size_t o = 0; o < l.out_ch; ++o) {
          double acc = b[o];
          const double* row = W + o * l.in_ch;
          for (std::size_t i = 0; i < l.in_ch; ++i) acc += row[i] * x[i];
          y[o] = activate(acc, l.act);
        }
      } else {
        // shared storage is (out_ch_src=in_ch, in_ch_src=out_ch)
        for (std::size_t o = 0; o < l.out_ch; ++o) y[o] = b[o];
        for (std::size_t i = 0; i < l.in_ch; ++i) {
          const double xi = x[i];
          const double* row = W + i * l.out_ch;
          for (std::size_t o = 0; o < l.out_ch; ++o) y[o] += row[o] * xi;
        }
        for (std::size_t o = 0; o < l.out_ch; ++o) y[o] = activate(y[o], l.act);
      }
      break;
    }
    case LayerSpec::Type::conv: {
      for (std::size_t o = 0; o < l.out_ch; ++o)
        for (std::size_t t = 0; t < l.out_len; ++t) {
          double acc = b[o];
          for (std::size_t c = 0; c < l.in_ch; ++c)
            for (std::size_t u = 0; u < l.kernel; ++u) {
              const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t * l.stride + u) -
                                         static_cast<std::ptrdiff_t>(l.pad);
              if (src < 0 || src >= static_cast<std::ptrdiff_t>(l.in_len)) continue;
              acc += W[(o * l.in_ch + c) * l.kernel + u] *
                     x[c * l.in_len + static_cast<std::size_t>(src)];
            }
          y[o * l.out_len + t] = activate(acc, l.act);
        }
      break;
    }
    case LayerSpec::Type::tconv: {
      // weight layout (in_ch, out_ch, kernel)
      std::vector<double> pre(l.out_size(), 0.0);
      for (std::size_t o = 0; o < l.out_ch; ++o)
        for (std::size_t t = 0; t < l.out_len; ++t) pre[o * l.out_len + t] = b[o];
      for (std::size_t c = 0; c < l.in_ch; ++c)
        for (std::size_t i = 0; i < l.in_len; ++i) {
          const double xi = x[c * l.in_len + i];
          for (std::size_t u = 0; u < l.kernel; ++u) {
            const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(i * l.stride + u) -
                                     static_cast<std::ptrdiff_t>(l.pad);
            if (t < 0 || t >= static_cast<std::ptrdiff_t>(l.out_len)) continue;
            for (std::size_t o = 0; o < l.out_ch; ++o)
              pre[o * l.out_len + static_cast<std::size_t>(t)] +=
                  W[(c * l.out_ch + o) * l.kernel + u] * xi;
          }
        }
      for (std::size_t k = 0; k < pre.size(); ++k) y[k] = activate(pre[k], l.act);
      break;
    }
  }
}

// Backward through one layer. dy is dL/d(post-activation of this layer);
// accumulates parameter gradients and returns dL/dx in dx.
inline void layer_backward(const AeModel& m, std::size_t li, const std::vector<double>& x,
                           const std::vector<double>& y, const std::vector<double>& dy,
                           std::vector<double>& grad, std::vector<double>& dx) {
  const auto& l = m.arch.layers[li];
  const auto& v = m.views[li];
  const double* W = m.weights.data() + v.w_off;
  double* dW = grad.data() + v.w_off;
  double* db = grad.data() + v.b_off;
  dx.assign(l.in_size(), 0.0);
  std::vector<double> dyp(l.out_size());
  for (std::size_t k = 0; k < dyp.size(); ++k) dyp[k] = dy[k] * activate_grad(y[k], l.act);
  switch (l.type) {
    case LayerSpec::Type::fc: {
      if (!v.transposed) {
        for (std::size_t o = 0; o < l.out_ch; ++o) {
          db[o] += dyp[o];
          const double g = dyp[o];
          double* drow = dW + o * l.in_ch;
          const double* row = W + o * l.in_ch;
          for (std::size_t i = 0; i < l.in_ch; ++i) {
            drow[i] += g * x[i];
            dx[i] += row[i] * g;
          }
        }
      } else {
        for (std::size_t o = 0; o < l.out_ch; ++o) db[o] += dyp[o];
        for (std::size_t i = 0; i < l.in_ch; ++i) {
          const double xi = x[i];
          const double* row = W + i * l.out_ch;
          double* drow = dW + i * l.out_ch;
          double acc = 0.0;
          for (std::size_t o = 0; o < l.out_ch; ++o) {
            drow[o] += dyp[o] * xi;
            acc += row[o] * dyp[o];
          }
          dx[i] = acc;
        }
      }
      break;
    }
    case LayerSpec::Type::conv: {
      for (std::size_t o = 0; o < l.out_ch; ++o)
        for (std::size_t t = 0; t < l.out_len; ++t) {
          const double g = dyp[o * l.out_len + t];
          db[o] += g;
          for (std::size_t c = 0; c < l.in_ch; ++c)
            for (std::size_t u = 0; u < l.kernel; ++u) {
              const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t * l.stride + u) -
                                         static_cast<std::ptrdiff_t>(l.pad);
              if (src < 0 || src >= static_cast<std::ptrdiff_t>(l.in_len)) continue;
              const std::size_t xi = c * l.in_len + static_cast<std::size_t>(src);
              const std::size_t wi = (o * l.in_ch + c) * l.kernel + u;
              dW[wi] += g * x[xi];
              dx[xi] += W[wi] * g;
            }
        }
      break;
    }
    case LayerSpec::Type::tconv: {
      for (std::size_t o = 0; o < l.out_ch; ++o)
        for (std::size_t t = 0; t < l.out_len; ++t) db[o] += dyp[o * l.out_len + t];
      for (std::size_t c = 0; c < l.in_ch; ++c)
        for (std::size_t i = 0; i < l.in_len; ++i) {
          const double xi = x[c * l.in_len + i];
          double acc = 0.0;
          for (std::size_t u = 0; u < l.kernel; ++u) {
            const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(i * l.stride + u) -
                                     static_cast<std::ptrdiff_t>(l.pad);
            if (t < 0 || t >= static_cast<std::ptrdiff_t>(l.out_len)) continue;
            for (std::size_t o = 0; o < l.out_ch; ++o) {
              const std::size_t yi = o * l.out_len + static_cast<std::size_t>(t);
              const std::size_t wi = (c * l.out_ch + o) * l.kernel + u;
              dW[wi] += dyp[yi] * xi;
              acc += W[wi] * dyp[yi];
            }
          }
          dx[c * l.in_len + i] += acc;
        }
      break;
    }
  }
}

inline std::vector<double> run_layers(const AeModel& m, std::size_t first, std::size_t last,
                                      std::vector<double> x) {
  std::vector<double> y;
  for (std::size_t li = first; li < last; ++li) {
    layer_forward(m, li, x, y);
    x.swap(y);
  }
  return x;
}

}  // namespace detail

// window is NC x NW channel-major, flattened.
inline std::vector<double> encode(const AeModel& m, const std::vector<double>& window) {
  if (window.size() != m.input_size()) throw shape_error("window shape does not match model");
  return detail::run_layers(m, 0, m.arch.encoder_layers, window);
}

inline std::vector<double> decode(const AeModel& m, const std::vector<double>& latent) {
  if (latent.size() != m.arch.latent_dim) throw shape_error("latent size does not match model");
  return detail::run_layers(m, m.arch.encoder_layers, m.arch.layers.size(), latent);
}

inline std::vector<double> reconstruct(const AeModel& m, const std::vector<double>& window) {
  if (window.size() != m.input_size()) throw shape_error("window shape does not match model");
  return detail::run_layers(m, 0, m.arch.layers.size(), window);
}

// MSE over all elements of one window, with gradient accumulation into grad
// (grad must be pre-sized to m.weights.size()).
inline double loss_and_grad(const AeModel& m, const std::vector<double>& window,
                            std::vector<double>* grad = nullptr) {
  if (window.size() != m.input_size()) throw shape_error("window shape does not match model");
  const std::size_t nl = m.arch.layers.size();
  std::vector<std::vector<double>> acts(nl + 1);
  acts[0] = window;
  for (std::size_t li = 0; li < nl; ++li) detail::layer_forward(m, li, acts[li], acts[li + 1]);
  const auto& out = acts[nl];
  const double dn = static_cast<double>(out.size());
  double loss = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double e = out[k] - window[k];
    loss += e * e;
  }
  loss /= dn;
  if (grad) {
    std::vector<double> dy(out.size()), dx;
    for (std::size_t k = 0; k < out.size(); ++k) dy[k] = 2.0 * (out[k] - window[k]) / dn;
    for (std::size_t li = nl; li-- > 0;) {
      detail::layer_backward(m, li, acts[li], acts[li + 1], dy, *grad, dx);
      dy.swap(dx);
    }
  }
  return loss;
}

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_adam = 1e-8;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;

  void validate() const {
    if (val_fraction <= 0.0 || val_fraction >= 1.0)
      throw invalid_config_error("val_fraction must be in (0,1)");
    if (learning_rate <= 0.0 || beta1 <= 0.0 || beta2 <= 0.0 || eps_adam <= 0.0)
      throw invalid_config_error("optimizer rates must be positive");
    if (batch_size < 1 || max_epochs < 1) throw invalid_config_error("bad batch/epoch settings");
  }
};

struct AdamState {
  std::vector<double> m, v;
  std::size_t t = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(std::vector<double>& params, const std::vector<double>& grad, const TrainConfig& cfg) {
    ++t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      params[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.eps_adam);
    }
  }
};

struct TrainReport {
  double initial_val_loss = 0.0;
  double final_train_loss = 0.0;
  double best_val_loss = 0.0;
  std::size_t epochs_run = 0;
};

// Mini-batch Adam on MSE with a seeded train/validation split; keeps the
// parameters achieving the best validation loss.
inline TrainReport train(AeModel& model, const std::vector<std::vector<double>>& windows,
                         const TrainConfig& cfg) {
  cfg.validate();
  if (windows.size() < 2) throw insufficient_data_error("training needs at least 2 windows");
  for (const auto& w : windows)
    if (w.size() != model.input_size()) throw shape_error("window shape does not match model");

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_val = static_cast<std::size_t>(std::floor(cfg.val_fraction *
                                                          static_cast<double>(windows.size())));
  n_val = std::min(n_val, windows.size() - 1);
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());

  auto eval_split = [&](const std::vector<std::size_t>& idx) {
    if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
    double acc = 0.0;
    for (std::size_t i : idx) acc += loss_and_grad(model, windows[i]);
    return acc / static_cast<double>(idx.size());
  };
  // fall back to the training split when the validation split is empty
  auto val_loss = [&] { return n_val > 0 ? eval_split(val_idx) : eval_split(train_idx); };

  TrainReport rep;
  rep.initial_val_loss = val_loss();
  AdamState adam(model.weights.size());
  std::vector<double> grad(model.weights.size());
  std::vector<double> best_weights = model.weights;
  double best = rep.initial_val_loss;
  std::size_t since_improve = 0;
  double train_loss = 0.0;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(train_idx.begin(), train_idx.end(), rng);
    train_loss = 0.0;
    for (std::size_t b = 0; b < train_idx.size(); b += cfg.batch_size) {
      const std::size_t end = std::min(b + cfg.batch_size, train_idx.size());
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k = b; k < end; ++k)
        batch_loss += loss_and_grad(model, windows[train_idx[k]], &grad);
      const double scale = 1.0 / static_cast<double>(end - b);
      for (double& g : grad) g *= scale;
      train_loss += batch_loss;
      adam.step(model.weights, grad, cfg);
    }
    train_loss /= static_cast<double>(train_idx.size());
    if (!std::isfinite(train_loss)) throw error("training loss diverged to non-finite values");
    rep.epochs_run = epoch + 1;

    const double vl = val_loss();
    if (vl < best) {
      best = vl;
      best_weights = model.weights;
      since_improve = 0;
    } else if (++since_improve >= cfg.patience) {
      break;
    }
  }
  model.weights = std::move(best_weights);
  model.trained_epochs = rep.epochs_run;
  model.best_val_loss = best;
  rep.best_val_loss = best;
  rep.final_train_loss = train_loss;
  return rep;
}

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
  bool passed(double tol) const { return max_rel_error < tol; }
};

// Central finite differences against the analytic gradient on a random
// parameter subset (at least min_per_layer coordinates per layer).
inline GradCheckReport gradient_check(AeModel model, const std::vector<double>& window,
                                      double h = 1e-5, std::size_t min_per_layer = 200,
                                      std::uint64_t seed = 0) {
  std::vector<double> grad(model.weights.size(), 0.0);
  loss_and_grad(model, window, &grad);

  GradCheckReport rep;
  std::mt19937_64 rng(seed);
  for (std::size_t li = 0; li < model.arch.layers.size(); ++li) {
    const auto& v = model.views[li];
    std::vector<std::size_t> coords;
    if (!v.transposed)
      for (std::size_t k = 0; k < v.w_cnt; ++k) coords.push_back(v.w_off + k);
    for (std::size_t k = 0; k < v.b_cnt; ++k) coords.push_back(v.b_off + k);
    std::shuffle(coords.begin(), coords.end(), rng);
    if (coords.size() > min_per_layer) coords.resize(min_per_layer);
    for (std::size_t ci : coords) {
      const double save = model.weights[ci];
      model.weights[ci] = save + h;
      const double lp = loss_and_grad(model, window);
      model.weights[ci] = save - h;
      const double lm = loss_and_grad(model, window);
      model.weights[ci] = save;
      const double numeric = (lp - lm) / (2.0 * h);
      const double denom = std::max({std::abs(numeric), std::abs(grad[ci]), 1e-6});
      rep.max_rel_error = std::max(rep.max_rel_error, std::abs(numeric - grad[ci]) / denom);
      ++rep.coords_checked;
    }
  }
  return rep;
}

// --- model persistence: "LSAE", u16 version, kind u8, nc/nw/latent u32,
// --- param count u64, params f64[], all little-endian
inline void save_model(const AeModel& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open model file for writing: " + path);
  const char magic[4] = {'L', 'S', 'A', 'E'};
  f.write(magic, 4);
  const std::uint16_t version = 1;
  f.write(reinterpret_cast<const char*>(&version), sizeof version);
  const std::uint8_t kind = static_cast<std::uint8_t>(m.arch.kind);
  f.write(reinterpret_cast<const char*>(&kind), sizeof kind);
  const std::uint32_t nc = static_cast<std::uint32_t>(m.arch.nc);
  const std::uint32_t nw = static_cast<std::uint32_t>(m.arch.nw);
  const std::uint32_t latent = static_cast<std::uint32_t>(m.arch.latent_dim);
  f.write(reinterpret_cast<const char*>(&nc), sizeof nc);
  f.write(reinterpret_cast<const char*>(&nw), sizeof nw);
  f.write(reinterpret_cast<const char*>(&latent), sizeof latent);
  const std::uint64_t count = m.weights.size();
  f.write(reinterpret_cast<const char*>(&count), sizeof count);
  f.write(reinterpret_cast<const char*>(m.weights.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!f) throw io_error("write failed: " + path);
}

inline AeModel load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open model file: " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "LSAE", 4) != 0) throw io_error("bad model magic: " + path);
  std::uint16_t version = 0;
  f.read(reinterpret_cast<char*>(&version), sizeof version);
  if (version != 1) throw io_error("unsupported model version");
  std::uint8_t kind = 0;
  std::uint32_t nc = 0, nw = 0, latent = 0;
  f.read(reinterpret_cast<char*>(&kind), sizeof kind);
  f.read(reinterpret_cast<char*>(&nc), sizeof nc);
  f.read(reinterpret_cast<char*>(&nw), sizeof nw);
  f.read(reinterpret_cast<char*>(&latent), sizeof latent);
  std::uint64_t count = 0;
  f.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!f) throw io_error("truncated model header: " + path);
  AeModel m = make_model(build_arch(static_cast<AeKind>(kind), nc, nw), 0);
  if (m.arch.latent_dim != latent) throw io_error("model header latent size inconsistent");
  if (m.weights.size() != count) throw io_error("model parameter count inconsistent");
  f.read(reinterpret_cast<char*>(m.weights.data()),
         static_cast<std::streamsize>(count * sizeof(double)));
  if (!f) throw io_error("truncated model parameters: " + path);
  return m;
}

}  // namespace lsuss

#endif
