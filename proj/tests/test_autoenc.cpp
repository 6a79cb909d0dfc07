#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "lsuss/autoenc.hpp"

using namespace lsuss;

namespace {

std::vector<std::vector<double>> sinusoid_windows(std::size_t count, std::size_t d,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.05, 0.3), phase(0.0, 6.28);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<std::vector<double>> out(count, std::vector<double>(d));
  for (auto& w : out) {
    const double f = freq(rng), p = phase(rng);
    for (std::size_t i = 0; i < d; ++i) w[i] = std::sin(f * double(i) + p) + noise(rng);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("fully connected architecture halves, quarters, then compresses to 10%") {
  const auto a = build_arch(AeKind::fully_connected, 3, 40);  // d = 120
  REQUIRE(a.layers.size() == 6);
  CHECK(a.encoder_layers == 3);
  CHECK(a.layers[0].in_ch == 120);
  CHECK(a.layers[0].out_ch == 60);
  CHECK(a.layers[1].out_ch == 30);
  CHECK(a.layers[2].out_ch == 12);
  CHECK(a.latent_dim == 12);
  // decoder mirrors and ties
  CHECK(a.layers[3].tied_to == 2);
  CHECK(a.layers[4].tied_to == 1);
  CHECK(a.layers[5].tied_to == 0);
  CHECK(a.layers[5].out_ch == 120);
  CHECK(a.layers[5].act == Activation::linear);
  for (std::size_t i = 0; i < 5; ++i) CHECK(a.layers[i].act == Activation::sigmoid);
}

TEST_CASE("convolutional architecture follows the strided table") {
  const std::size_t nc = 2, nw = 24;
  const auto a = build_arch(AeKind::convolutional, nc, nw);  // L = 48
  REQUIRE(a.layers.size() == 10);
  CHECK(a.layers[0].out_ch == 2 * nc);
  CHECK(a.layers[0].out_len == nw / 2);
  CHECK(a.layers[1].out_ch == 4 * nc);
  CHECK(a.layers[1].out_len == nw / 4);
  CHECK(a.layers[1].out_size() == nc * nw);  // flattening preserves size
  CHECK(a.latent_dim == ceil_div(nc * nw, 6));
  CHECK(a.layers[9].out_size() == nc * nw);
  CHECK(a.layers[9].act == Activation::linear);
  CHECK_THROWS_AS(build_arch(AeKind::convolutional, 2, 50), invalid_argument_error);
}

TEST_CASE("tied decoder layers share encoder weight storage") {
  auto m = make_model(build_arch(AeKind::fully_connected, 1, 20), 1);
  CHECK(m.views[5].w_off == m.views[0].w_off);
  CHECK(m.views[5].transposed);
  CHECK_FALSE(m.views[0].transposed);
  // but biases are independent
  CHECK(m.views[5].b_off != m.views[0].b_off);
}

TEST_CASE("reconstruction round-trips shapes") {
  auto m = make_model(build_arch(AeKind::fully_connected, 2, 10), 3);
  std::vector<double> w(20, 0.5);
  const auto z = encode(m, w);
  CHECK(z.size() == m.arch.latent_dim);
  const auto y = decode(m, z);
  CHECK(y.size() == 20);
  CHECK(reconstruct(m, w) == y);
  CHECK_THROWS_AS(encode(m, std::vector<double>(7, 0.0)), shape_error);
}

TEST_CASE("analytic gradient matches central differences, fc") {
  auto m = make_model(build_arch(AeKind::fully_connected, 1, 16), 7);
  const auto windows = sinusoid_windows(1, 16, 7);
  const auto rep = gradient_check(m, windows[0], 1e-5, 150, 7);
  INFO("max rel error " << rep.max_rel_error << " over " << rep.coords_checked);
  CHECK(rep.passed(1e-4));
}

TEST_CASE("analytic gradient matches central differences, conv") {
  auto m = make_model(build_arch(AeKind::convolutional, 2, 8), 11);
  // move ReLU pre-activations off the kink at exactly zero, where one-sided
  // numeric derivatives are meaningless
  std::mt19937_64 rng(11);
  std::normal_distribution<double> jitter(0.0, 0.1);
  for (auto& p : m.weights) p += jitter(rng);
  const auto windows = sinusoid_windows(1, 16, 11);
  const auto rep = gradient_check(m, windows[0], 1e-5, 120, 11);
  INFO("max rel error " << rep.max_rel_error << " over " << rep.coords_checked);
  CHECK(rep.passed(1e-4));
}

TEST_CASE("adam first step matches the bias-corrected closed form") {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  AdamState st(1);
  std::vector<double> p{1.0};
  const std::vector<double> g{0.3};
  st.step(p, g, cfg);
  // after bias correction the first step is lr * g/(|g| + eps)
  const double expected = 1.0 - cfg.learning_rate * 0.3 / (0.3 + cfg.eps_adam);
  CHECK(p[0] == Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("training reduces validation loss and restores the best weights") {
  auto m = make_model(build_arch(AeKind::fully_connected, 1, 16), 5);
  const auto windows = sinusoid_windows(120, 16, 5);
  TrainConfig cfg;
  cfg.max_epochs = 30;
  cfg.batch_size = 16;
  cfg.learning_rate = 3e-3;
  cfg.seed = 5;
  const auto rep = train(m, windows, cfg);
  INFO("val " << rep.initial_val_loss << " -> " << rep.best_val_loss);
  CHECK(rep.best_val_loss < rep.initial_val_loss);
  CHECK(rep.epochs_run >= 1);
  CHECK(m.best_val_loss == rep.best_val_loss);
}

TEST_CASE("identical seeds give identical trained weights") {
  const auto windows = sinusoid_windows(60, 16, 9);
  TrainConfig cfg;
  cfg.max_epochs = 5;
  cfg.seed = 9;
  auto m1 = make_model(build_arch(AeKind::fully_connected, 1, 16), 9);
  auto m2 = make_model(build_arch(AeKind::fully_connected, 1, 16), 9);
  train(m1, windows, cfg);
  train(m2, windows, cfg);
  CHECK(m1.weights == m2.weights);
}

TEST_CASE("model files round-trip byte for byte") {
  auto m = make_model(build_arch(AeKind::fully_connected, 2, 12), 13);
  const auto windows = sinusoid_windows(40, 24, 13);
  TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.seed = 13;
  train(m, windows, cfg);

  const std::string p1 = "ae_roundtrip_1.lsae", p2 = "ae_roundtrip_2.lsae";
  save_model(m, p1);
  const auto loaded = load_model(p1);
  CHECK(loaded.weights == m.weights);
  CHECK(loaded.arch.kind == m.arch.kind);
  CHECK(loaded.arch.nc == m.arch.nc);
  CHECK(loaded.arch.nw == m.arch.nw);
  save_model(loaded, p2);
  CHECK(read_file(p1) == read_file(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("train validates its configuration") {
  auto m = make_model(build_arch(AeKind::fully_connected, 1, 8), 1);
  const auto windows = sinusoid_windows(10, 8, 1);
  TrainConfig cfg;
  cfg.val_fraction = 1.5;
  CHECK_THROWS_AS(train(m, windows, cfg), invalid_config_error);
  cfg = TrainConfig{};
  CHECK_THROWS_AS(train(m, {windows[0]}, cfg), insufficient_data_error);
  CHECK_THROWS_AS(train(m, {{1.0, 2.0}}, cfg), error);
}
