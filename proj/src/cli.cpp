// Copyright 2026 The lzspa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "lzspa/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "lzspa/bench.hpp"
#include "lzspa/classifier.hpp"
#include "lzspa/codec.hpp"
#include "lzspa/evaluation.hpp"
#include "lzspa/filtering.hpp"
#include "lzspa/generation.hpp"
#include "lzspa/lz_transform.hpp"
#include "lzspa/token_io.hpp"

namespace lzspa {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Reads CLI11 configuration from JSON: top-level keys are root options,
// objects named after a subcommand hold that subcommand's options.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        j[name] = opt->results().size() == 1 ? json(opt->results().front()) : json(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json inner = json::parse(to_config(sub, default_also, false, ""));
      if (!inner.empty()) j[sub->get_name()] = inner;
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        // Marks the subcommand as present, as CLI11's own formats do.
        CLI::ConfigItem open;
        open.parents = next;
        open.name = "++";
        items.push_back(open);
        collect(value, next, items);
        CLI::ConfigItem close;
        close.parents = next;
        close.name = "--";
        items.push_back(close);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Re-throws argument parse failures as usage errors.
template <typename F>
auto as_usage(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> parse_doubles(const std::string& text, char sep = ',') {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw UsageError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// "iid:p0,p1,..."  or  "markov:r0/r1/...[@initial]" with comma-separated rows.
SourceSpec parse_source(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("source must be iid:<pmf> or markov:<rows>");
  const std::string kind = text.substr(0, colon);
  std::string body = text.substr(colon + 1);
  if (kind == "iid") return SourceSpec::iid(parse_doubles(body));
  if (kind != "markov") throw UsageError("unknown source kind '" + kind + "'");
  std::vector<double> initial;
  if (const auto at = body.find('@'); at != std::string::npos) {
    initial = parse_doubles(body.substr(at + 1));
    body = body.substr(0, at);
  }
  std::vector<std::vector<double>> rows;
  std::stringstream ss(body);
  std::string row;
  while (std::getline(ss, row, '/')) rows.push_back(parse_doubles(row));
  if (initial.empty()) initial.assign(rows.size(), 1.0 / static_cast<double>(rows.size()));
  return SourceSpec::markov1(std::move(rows), std::move(initial));
}

std::vector<std::vector<double>> matrix_from_json(const json& j, const char* what) {
  const json& m = j.is_object() && j.contains("matrix") ? j.at("matrix") : j;
  if (!m.is_array()) throw UsageError(std::string(what) + " JSON must be a matrix or {\"matrix\": ...}");
  return m.get<std::vector<std::vector<double>>>();
}

json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

Channel parse_channel(const std::string& text) {
  if (text == "pm1") return Channel::additive_pm1_noise();
  if (text.rfind("bsc:", 0) == 0) return Channel::binary_symmetric(parse_doubles(text.substr(4)).at(0));
  if (text.rfind("identity:", 0) == 0) {
    return Channel::identity(static_cast<std::size_t>(parse_doubles(text.substr(9)).at(0)));
  }
  return Channel(matrix_from_json(read_json(text), "channel"));
}

LossMatrix parse_loss(const std::string& text, const Channel& channel) {
  if (text == "hamming") return LossMatrix::hamming(channel.input_size());
  if (text == "experiment") return markov_experiment_loss();
  if (text == "squared") {
    std::vector<double> values(channel.input_size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);
    return LossMatrix::squared(values, values);
  }
  return LossMatrix(matrix_from_json(read_json(text), "loss"));
}

LZTransformSpa load_model(const std::string& path) { return LZTransformSpa::load(read_file(path)); }

std::vector<LabeledSequence> read_samples(const std::vector<std::string>& specs, TokenFormat format) {
  std::vector<LabeledSequence> out;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("sample must be LABEL=PATH, got '" + spec + "'");
    out.push_back({read_tokens(spec.substr(eq + 1), format), spec.substr(0, eq)});
  }
  return out;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Classifier bundle: manifest.json plus one model file per class.
void save_bundle(const fs::path& dir, const ClassifierModel& model) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  json classes = json::array();
  for (std::size_t i = 0; i < model.labels().size(); ++i) {
    const std::string file = "class_" + std::to_string(i) + ".lzspa";
    write_file(dir / file, model.models()[i].save());
    classes.push_back({{"label", model.labels()[i]}, {"file", file}, {"hash", hex64(model.models()[i].model_hash())}});
  }
  const json manifest = {{"format", "lzspa-classifier"},
                         {"version", 1},
                         {"gamma", model.gamma()},
                         {"epochs", model.epochs()},
                         {"alphabet_size", model.alphabet_size()},
                         {"classes", classes}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

ClassifierModel load_bundle(const fs::path& dir) {
  const json manifest = read_json(dir / "manifest.json");
  if (manifest.value("format", "") != "lzspa-classifier") throw UsageError("not a classifier bundle");
  std::vector<std::string> labels;
  std::vector<LZTransformSpa> models;
  for (const auto& c : manifest.at("classes")) {
    labels.push_back(c.at("label").get<std::string>());
    models.push_back(load_model((dir / c.at("file").get<std::string>()).string()));
    if (hex64(models.back().model_hash()) != c.at("hash").get<std::string>()) {
      throw MismatchError("model file for class '" + labels.back() + "' does not match the manifest");
    }
  }
  return ClassifierModel(std::move(labels), std::move(models));
}

unsigned env_threads() {
  if (const char* v = std::getenv("LZSPA_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(v));
    } catch (const std::exception&) {
      throw UsageError(std::string("LZSPA_THREADS must be a non-negative integer, got '") + v + "'");
    }
  }
  return 1;
}

json model_summary(const LZTransformSpa& m) {
  const ComplexityReport c = m.complexity_report();
  return {{"nodes", c.nodes},
          {"symbols", c.symbols},
          {"alphabet_size", m.alphabet_size()},
          {"inner", to_string(m.family().kind())},
          {"gamma", m.family().gamma()},
          {"epochs", m.epochs_trained()},
          {"frozen", m.frozen()},
          {"max_depth", m.tree().max_depth()},
          {"depth_histogram", m.tree().depth_histogram()},
          {"nodes_over_n_per_log2n", c.nodes_over_n_per_log2n},
          {"memory_bytes", c.memory_bytes},
          {"hash", hex64(m.model_hash())}};
}

struct Options {
  std::string format = "auto";
  // train
  std::vector<std::string> inputs;
  std::string output;
  std::string model;
  double gamma = 0.5;
  std::size_t epochs = 1;
  std::string inner = "dirichlet";
  // classifier
  std::vector<std::string> samples;
  std::vector<double> gammas = default_gamma_grid();
  std::vector<std::size_t> epoch_grid = {1};
  double validation = 0.2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string csv;
  // filter
  std::string channel = "pm1";
  std::string loss = "experiment";
  std::string regime = "causal";
  std::size_t mc = 1000;
  std::string clean;
  std::optional<double> markov_flip;
  // generate
  std::size_t length = 256;
  double temperature = 1.0;
  std::size_t top_k = 0;
  std::size_t min_context = 64;
  std::string seed_file;
  // eval
  std::string source;
  std::size_t n = 4;
  std::string hist_a, hist_b;
  std::vector<double> kl_gammas = ConvergenceConfig{}.gammas;
  std::vector<std::size_t> m_grid = ConvergenceConfig{}.m_grid;
  std::size_t seeds = 5;
  double threshold = 0.05;
  // bench
  std::vector<std::size_t> sizes;
  std::size_t alphabet = 0;
  std::size_t repeats = 3;
};

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_train(const Options& o, std::ostream& out) {
  const TokenFormat fmt = as_usage([&] { return parse_token_format(o.format); });
  std::vector<Sequence> data;
  for (const auto& p : o.inputs) data.push_back(read_tokens(p, fmt));
  const SpaFamily family = o.inner == "uniform" ? SpaFamily::uniform()
                           : o.inner == "dirichlet" ? SpaFamily::dirichlet(o.gamma)
                                                    : throw UsageError("inner SPA must be dirichlet or uniform");
  LZTransformSpa model(data.front().alphabet(), family);
  model.train(data, o.epochs);
  model.freeze();
  write_file(o.output, model.save());
  json j = model_summary(model);
  j["output"] = o.output;
  emit(out, j);
  return kExitOk;
}

int cmd_compress(const Options& o, std::ostream& out) {
  const Sequence seq = read_tokens(o.inputs.front(), as_usage([&] { return parse_token_format(o.format); }));
  EncodedStream stream;
  double loss_bits = 0.0;
  if (!o.model.empty()) {
    const LZTransformSpa model = load_model(o.model);
    if (model.alphabet_size() != seq.alphabet().size()) throw AlphabetError("model alphabet does not match the input");
    stream = compress_static(model, seq);
    loss_bits = model.evaluate_frozen(seq).total_bits;
  } else {
    stream = compress_adaptive(seq, o.gamma);
    LZTransformSpa m(seq.alphabet(), SpaFamily::dirichlet(o.gamma));
    loss_bits = seq.empty() ? 0.0 : m.evaluate_log_loss(seq).total_bits;
  }
  const auto bytes = to_bytes(stream);
  write_file(o.output, bytes);
  emit(out, {{"mode", o.model.empty() ? "adaptive" : "static"},
             {"symbols", seq.size()},
             {"alphabet_size", seq.alphabet().size()},
             {"payload_bits", stream.payload_bits()},
             {"log_loss_bits", loss_bits},
             {"file_bytes", bytes.size()},
             {"output", o.output}});
  return kExitOk;
}

int cmd_decompress(const Options& o, std::ostream& out) {
  const EncodedStream stream = from_bytes(read_file(o.inputs.front()));
  std::optional<LZTransformSpa> model;
  if (!o.model.empty()) model.emplace(load_model(o.model));
  if (stream.header.mode == CodecMode::kStatic && !model) {
    throw UsageError("static stream: pass the model with --model");
  }
  const Sequence seq = decompress(stream, model ? &*model : nullptr);
  write_tokens(o.output, seq, as_usage([&] { return parse_token_format(o.format); }));
  emit(out, {{"symbols", seq.size()}, {"alphabet_size", seq.alphabet().size()}, {"output", o.output}});
  return kExitOk;
}

int cmd_fit(const Options& o, std::ostream& out) {
  const auto data = read_samples(o.samples, as_usage([&] { return parse_token_format(o.format); }));
  const ClassifierModel model = ClassifierModel::fit(data, FitConfig{o.gamma, o.epochs});
  save_bundle(o.output, model);
  emit(out, {{"classes", model.labels()}, {"gamma", model.gamma()}, {"epochs", model.epochs()}, {"output", o.output}});
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const ClassifierModel model = load_bundle(o.model);
  const TokenFormat fmt = as_usage([&] { return parse_token_format(o.format); });
  json results = json::array();
  for (const auto& p : o.inputs) {
    const Sequence seq = read_tokens(p, fmt);
    if (seq.alphabet().size() != model.alphabet_size()) {
      throw AlphabetError("'" + p + "' does not match the classifier alphabet");
    }
    const Classification c = model.classify(seq, o.threads);
    results.push_back({{"input", p}, {"label", c.label}, {"losses_bits", c.losses_bits}});
  }
  emit(out, {{"labels", model.labels()}, {"results", results}});
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto data = read_samples(o.samples, as_usage([&] { return parse_token_format(o.format); }));
  SweepConfig cfg;
  cfg.gamma_grid = o.gammas;
  cfg.epoch_grid = o.epoch_grid;
  cfg.validation_fraction = o.validation;
  cfg.seed = o.seed;
  const SweepResult r = sweep(data, cfg);
  json table = json::array();
  std::ostringstream csv;
  csv << "gamma,epochs,mean_validation_loss,validation_accuracy\n";
  for (const auto& row : r.table) {
    table.push_back({{"gamma", row.gamma},
                     {"epochs", row.epochs},
                     {"mean_validation_loss", row.mean_validation_loss},
                     {"validation_accuracy", row.validation_accuracy}});
    csv << row.gamma << ',' << row.epochs << ',' << row.mean_validation_loss << ',' << row.validation_accuracy << '\n';
  }
  if (!o.csv.empty()) write_text(o.csv, csv.str());
  emit(out, {{"seed", o.seed},
             {"best_gamma", r.best_gamma},
             {"best_epochs", r.best_epochs},
             {"best_loss", r.best_loss},
             {"table", table}});
  return kExitOk;
}

int cmd_filter(const Options& o, std::ostream& out) {
  const Channel channel = as_usage([&] { return parse_channel(o.channel); });
  const LossMatrix loss = as_usage([&] { return parse_loss(o.loss, channel); });
  const FilterRegime regime = as_usage([&] { return FilterRegime::parse(o.regime); });
  const Sequence noisy = read_tokens(o.inputs.front(), as_usage([&] { return parse_token_format(o.format); }));
  if (noisy.alphabet().size() != channel.output_size()) {
    throw AlphabetError("noisy alphabet size does not match the channel output");
  }
  LZTransformSpa spa(noisy.alphabet(), SpaFamily::dirichlet(o.gamma));
  DelayOptions delay;
  delay.mc_samples = o.mc;
  delay.seed = o.seed;
  const FilterOutput est = run_filter(spa, channel, loss, noisy.tokens(), regime, delay);
  if (!o.output.empty()) {
    write_tokens(o.output, Sequence(Alphabet(std::max<std::size_t>(2, loss.estimate_size())), est.estimates),
                 TokenFormat::kInt);
  }
  json j = {{"regime", regime.to_string()},
            {"seed", o.seed},
            {"mc_samples", o.mc},
            {"symbols", noisy.size()},
            {"max_clamp", est.max_clamp}};
  std::optional<Sequence> clean;
  if (!o.clean.empty()) {
    clean = read_tokens(o.clean, as_usage([&] { return parse_token_format(o.format); }));
    if (clean->size() != noisy.size()) throw MismatchError("clean and noisy lengths differ");
    j["loss"] = mean_loss(clean->tokens(), est.estimates, loss);
  }
  if (o.markov_flip) {
    const MarkovSource source = MarkovSource::symmetric_binary(*o.markov_flip);
    const OracleResult oracle = dp_optimal_filter(source, channel, loss, noisy.tokens(), regime);
    HmmPredictiveSpa truth(source, channel);
    LZTransformSpa fresh(noisy.alphabet(), SpaFamily::dirichlet(o.gamma));
    double kl_bits = 0.0;
    for (Symbol z : noisy.tokens()) {
      kl_bits += std::log2(truth.prob(z) / fresh.prob(z));
      truth.observe(z);
      fresh.observe(z);
    }
    const ExcessLossBound b = excess_loss_bound(kl_bits, noisy.size(), channel, loss, regime);
    j["oracle_expected_loss"] = oracle.expected_loss;
    j["kl_bits_estimate"] = kl_bits;
    j["bound"] = {{"c1", b.c1}, {"lambda_max", b.lambda_max}, {"factor", b.factor}, {"value", b.value}};
    if (clean) {
      const double oracle_loss = mean_loss(clean->tokens(), oracle.estimates, loss);
      j["oracle_loss"] = oracle_loss;
      j["excess_loss"] = j["loss"].get<double>() - oracle_loss;
    }
  }
  emit(out, j);
  return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out) {
  const LZTransformSpa model = load_model(o.model);
  GenConfig cfg;
  cfg.temperature = o.temperature;
  cfg.top_k = o.top_k;
  cfg.min_context = o.min_context;
  cfg.rng_seed = o.seed;
  cfg.length = o.length;
  if (!o.seed_file.empty()) {
    Sequence seed = read_tokens(o.seed_file, as_usage([&] { return parse_token_format(o.format); }));
    if (seed.alphabet().size() != model.alphabet_size()) throw AlphabetError("seed alphabet does not match the model");
    cfg.seed_data = std::move(seed);
  }
  const GenerationResult g = generate(model, cfg);
  write_tokens(o.output, g.output, as_usage([&] { return parse_token_format(o.format); }));
  emit(out, {{"rng_seed", o.seed},
             {"length", g.output.size()},
             {"backshifts", g.backshifts},
             {"temperature", o.temperature},
             {"top_k", o.top_k == 0 ? model.alphabet_size() : o.top_k},
             {"output", o.output}});
  return kExitOk;
}

int cmd_eval_kl(const Options& o, std::ostream& out) {
  const SourceSpec source = parse_source(o.source);
  const LZTransformSpa model = load_model(o.model);
  if (!model.frozen()) throw UsageError("KL evaluation needs a frozen model");
  emit(out, {{"n", o.n}, {"kl_bits", exact_kl(source, model, o.n)}});
  return kExitOk;
}

int cmd_eval_wd(const Options& o, std::ostream& out) {
  const TokenFormat fmt = as_usage([&] { return parse_token_format(o.format); });
  const Sequence a = read_tokens(o.hist_a, fmt);
  const Sequence b = read_tokens(o.hist_b, fmt);
  if (a.alphabet().size() != b.alphabet().size()) throw AlphabetError("histograms over different alphabets");
  emit(out, {{"wasserstein", wasserstein_1d(histogram(a), histogram(b))}});
  return kExitOk;
}

int cmd_eval_convergence(const Options& o, std::ostream& out) {
  ConvergenceConfig cfg;
  cfg.gammas = o.kl_gammas;
  cfg.m_grid = o.m_grid;
  cfg.n = o.n;
  cfg.seeds = o.seeds;
  cfg.base_seed = o.seed;
  cfg.final_threshold = o.threshold;
  cfg.threads = o.threads;
  const ConvergenceReport r = convergence_experiment(parse_source(o.source), cfg);
  std::ostringstream csv;
  csv << "gamma,m,seed,kl_bits\n";
  json rows = json::array();
  for (const auto& row : r.rows) {
    csv << row.gamma << ',' << row.m << ',' << row.seed << ',' << row.kl_bits << '\n';
    rows.push_back({{"gamma", row.gamma}, {"m", row.m}, {"seed", row.seed}, {"kl_bits", row.kl_bits}});
  }
  if (!o.csv.empty()) write_text(o.csv, csv.str());
  json summaries = json::array();
  for (const auto& s : r.summaries) {
    summaries.push_back({{"gamma", s.gamma},
                         {"m_grid", s.m_grid},
                         {"median_kl", s.median_kl},
                         {"inversions", s.inversions},
                         {"trend_ok", s.trend_ok},
                         {"final_ok", s.final_ok}});
  }
  json j = {{"seed", o.seed}, {"n", o.n}, {"summaries", summaries}, {"rows", rows}};
  if (!o.output.empty()) write_text(o.output, j.dump(2) + "\n");
  emit(out, j);
  return kExitOk;
}

int cmd_inspect(const Options& o, std::ostream& out) {
  emit(out, model_summary(load_model(o.model)));
  return kExitOk;
}

int cmd_bench(const std::string& which, const Options& o, std::ostream& out) {
  std::string report;
  if (which == "train") {
    TrainBenchConfig cfg;
    if (!o.sizes.empty()) cfg.sizes = o.sizes;
    if (o.alphabet != 0) cfg.alphabet_size = o.alphabet;
    cfg.repeats = o.repeats;
    cfg.seed = o.seed;
    report = to_json(bench_train_throughput(cfg));
  } else {
    GenBenchConfig cfg;
    if (!o.sizes.empty()) cfg.training_sizes = o.sizes;
    if (o.alphabet != 0) cfg.alphabet_size = o.alphabet;
    cfg.seed = o.seed;
    report = to_json(bench_generation_latency(cfg));
  }
  if (!o.output.empty()) write_text(o.output, report + "\n");
  out << report << "\n";
  return kExitOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LZ78-transformed sequential probability assignments", "lzspa"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file supplying any flag; subcommand flags go under the subcommand name");
  Options o;
  o.threads = env_threads();

  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Token file format: auto, raw (bytes) or int")->capture_default_str();
  };

  CLI::App* train = app.add_subcommand("train", "Train and freeze an LZ78-transformed model");
  train->add_option("--input,-i", o.inputs, "Token files, parsed in order")->required();
  train->add_option("--output,-o", o.output, "Model file to write")->required();
  train->add_option("--gamma", o.gamma, "Dirichlet parameter")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--epochs", o.epochs, "Passes over the data")->capture_default_str()->check(CLI::PositiveNumber);
  train->add_option("--inner", o.inner, "Inner SPA: dirichlet or uniform")->capture_default_str();
  add_format(train);

  CLI::App* comp = app.add_subcommand("compress", "Arithmetic-code a token file");
  comp->add_option("--input,-i", o.inputs, "Token file")->required()->expected(1);
  comp->add_option("--output,-o", o.output, "Compressed file")->required();
  comp->add_option("--model,-m", o.model, "Frozen model for static coding (adaptive if absent)");
  comp->add_option("--gamma", o.gamma, "Dirichlet parameter (adaptive mode)")->capture_default_str()->check(CLI::PositiveNumber);
  add_format(comp);

  CLI::App* decomp = app.add_subcommand("decompress", "Decode a compressed file");
  decomp->add_option("--input,-i", o.inputs, "Compressed file")->required()->expected(1);
  decomp->add_option("--output,-o", o.output, "Token file to write")->required();
  decomp->add_option("--model,-m", o.model, "Model used for static coding");
  add_format(decomp);

  CLI::App* fit = app.add_subcommand("fit", "Fit a min-log-loss classifier");
  fit->add_option("--sample,-s", o.samples, "LABEL=PATH training sample")->required();
  fit->add_option("--output,-o", o.output, "Bundle directory")->required();
  fit->add_option("--gamma", o.gamma, "Dirichlet parameter")->capture_default_str()->check(CLI::PositiveNumber);
  fit->add_option("--epochs", o.epochs, "Passes over the data")->capture_default_str()->check(CLI::PositiveNumber);
  add_format(fit);
  fit->callback([&] {});

  CLI::App* classify = app.add_subcommand("classify", "Classify token files with a fitted bundle");
  classify->add_option("--model,-m", o.model, "Bundle directory")->required();
  classify->add_option("--input,-i", o.inputs, "Token files")->required();
  classify->add_option("--threads", o.threads, "Worker threads, 0 = one per class (env LZSPA_THREADS)");
  add_format(classify);

  CLI::App* sw = app.add_subcommand("sweep", "Hyperparameter sweep on a validation split");
  sw->add_option("--sample,-s", o.samples, "LABEL=PATH sample")->required();
  sw->add_option("--gammas", o.gammas, "Gamma grid")->delimiter(',')->capture_default_str();
  sw->add_option("--epochs", o.epoch_grid, "Epoch grid")->delimiter(',')->capture_default_str();
  sw->add_option("--validation", o.validation, "Validation fraction")->capture_default_str();
  sw->add_option("--seed", o.seed, "Split seed")->capture_default_str();
  sw->add_option("--csv", o.csv, "Also write the table as CSV");
  add_format(sw);

  CLI::App* filt = app.add_subcommand("filter", "Denoise a noisy token file through a known channel");
  filt->add_option("--input,-i", o.inputs, "Noisy token file")->required()->expected(1);
  filt->add_option("--channel", o.channel, "pm1, bsc:<p>, identity:<A> or a JSON matrix file")->capture_default_str();
  filt->add_option("--loss", o.loss, "hamming, squared, experiment or a JSON matrix file")->capture_default_str();
  filt->add_option("--regime", o.regime, "causal, delay:<d> or lookahead:<l>")->capture_default_str();
  filt->add_option("--mc", o.mc, "Monte-Carlo samples for the delay regime")->capture_default_str()->check(CLI::PositiveNumber);
  filt->add_option("--seed", o.seed, "Monte-Carlo seed")->capture_default_str();
  filt->add_option("--gamma", o.gamma, "Dirichlet parameter of the SPA")->capture_default_str()->check(CLI::PositiveNumber);
  filt->add_option("--output,-o", o.output, "Write estimates as an int token file");
  filt->add_option("--clean", o.clean, "Clean token file for measuring the loss");
  filt->add_option("--markov-source", o.markov_flip, "Flip probability of a symmetric Markov source for oracle metrics");
  add_format(filt);

  CLI::App* gen = app.add_subcommand("generate", "Sample from a frozen model");
  gen->add_option("--model,-m", o.model, "Model file")->required();
  gen->add_option("--length,-n", o.length, "Symbols to generate")->capture_default_str();
  gen->add_option("--temperature", o.temperature, "Sampling temperature, 0 = argmax")->capture_default_str()->check(CLI::NonNegativeNumber);
  gen->add_option("--top-k", o.top_k, "Keep the K most likely symbols, 0 = all")->capture_default_str();
  gen->add_option("--min-context", o.min_context, "Backshift suffix length")->capture_default_str();
  gen->add_option("--seed-file", o.seed_file, "Token file traversed before sampling");
  gen->add_option("--rng-seed", o.seed, "Sampling seed")->capture_default_str();
  gen->add_option("--output,-o", o.output, "Token file to write")->required();
  add_format(gen);

  CLI::App* ev = app.add_subcommand("eval", "Evaluation metrics");
  ev->require_subcommand(1);
  CLI::App* kl = ev->add_subcommand("kl", "Exhaustive KL divergence between a source and a model");
  kl->add_option("--source", o.source, "iid:<pmf> or markov:<row>/<row>[@<initial>]")->required();
  kl->add_option("--model,-m", o.model, "Frozen model file")->required();
  kl->add_option("--n", o.n, "Sequence length")->capture_default_str();
  CLI::App* wd = ev->add_subcommand("wd", "1-D Wasserstein distance between symbol histograms");
  wd->add_option("--a", o.hist_a, "First token file")->required();
  wd->add_option("--b", o.hist_b, "Second token file")->required();
  add_format(wd);
  CLI::App* conv = ev->add_subcommand("convergence", "KL convergence as the training set grows");
  conv->add_option("--source", o.source, "iid:<pmf> or markov:<row>/<row>[@<initial>]")->required();
  conv->add_option("--gammas", o.kl_gammas, "Gamma grid")->delimiter(',')->capture_default_str();
  conv->add_option("--m-grid", o.m_grid, "Training-set sizes")->delimiter(',')->capture_default_str();
  conv->add_option("--n", o.n, "Sequence length")->capture_default_str();
  conv->add_option("--seeds", o.seeds, "Seeds per grid point")->capture_default_str();
  conv->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  conv->add_option("--threshold", o.threshold, "Final KL threshold in bits")->capture_default_str();
  conv->add_option("--threads", o.threads, "Worker threads (env LZSPA_THREADS)");
  conv->add_option("--csv", o.csv, "Write per-seed rows as CSV");
  conv->add_option("--json", o.output, "Write the report as JSON");

  CLI::App* inspect = app.add_subcommand("inspect", "Print model statistics");
  inspect->add_option("model", o.model, "Model file")->required();

  CLI::App* bench = app.add_subcommand("bench", "Benchmarks with JSON reports");
  bench->require_subcommand(1);
  CLI::App* btrain = bench->add_subcommand("train", "Training throughput across corpus sizes");
  CLI::App* bgen = bench->add_subcommand("gen", "Generation latency across model sizes");
  for (CLI::App* b : {btrain, bgen}) {
    b->add_option("--sizes", o.sizes, "Corpus sizes")->delimiter(',');
    b->add_option("--alphabet", o.alphabet, "Alphabet size");
    b->add_option("--seed", o.seed, "Data seed")->capture_default_str();
    b->add_option("--json", o.output, "Write the report to a file");
  }
  btrain->add_option("--repeats", o.repeats, "Timed repeats per size")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "lzspa 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (*train) return cmd_train(o, out);
  if (*comp) return cmd_compress(o, out);
  if (*decomp) return cmd_decompress(o, out);
  if (*fit) return cmd_fit(o, out);
  if (*classify) return cmd_classify(o, out);
  if (*sw) return cmd_sweep(o, out);
  if (*filt) return cmd_filter(o, out);
  if (*gen) return cmd_generate(o, out);
  if (*kl) return cmd_eval_kl(o, out);
  if (*wd) return cmd_eval_wd(o, out);
  if (*conv) return cmd_eval_convergence(o, out);
  if (*inspect) return cmd_inspect(o, out);
  if (*btrain) return cmd_bench("train", o, out);
  if (*bgen) return cmd_bench("gen", o, out);
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const MismatchError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace lzspa
