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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "lzspa/classifier.hpp"
#include "lzspa/codec.hpp"
#include "lzspa/evaluation.hpp"
#include "lzspa/filtering.hpp"
#include "lzspa/generation.hpp"
#include "lzspa/lz_transform.hpp"
#include "lzspa/types.hpp"

namespace py = pybind11;
using namespace lzspa;

namespace {

Sequence to_sequence(const std::vector<Symbol>& tokens, std::size_t alphabet_size) {
  return Sequence(Alphabet(alphabet_size), tokens);
}

std::vector<std::uint8_t> as_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::bytes to_py(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

py::dict loss_dict(const LogLossReport& r) {
  py::dict d;
  d["total_bits"] = r.total_bits;
  d["per_symbol_bits"] = r.per_symbol_bits;
  d["length"] = r.length;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lzspa, m) {
  m.doc() = "LZ78-transformed sequential probability assignments";

  py::register_exception<AlphabetError>(m, "AlphabetError", PyExc_ValueError);

  py::class_<LZTransformSpa>(m, "Model")
      .def(py::init([](std::size_t alphabet_size, double gamma) {
             return LZTransformSpa(Alphabet(alphabet_size), SpaFamily::dirichlet(gamma));
           }),
           py::arg("alphabet_size"), py::arg("gamma") = 0.5)
      .def_property_readonly("alphabet_size", &LZTransformSpa::alphabet_size)
      .def_property_readonly("gamma", [](const LZTransformSpa& s) { return s.family().gamma(); })
      .def_property_readonly("frozen", &LZTransformSpa::frozen)
      .def_property_readonly("node_count", [](const LZTransformSpa& s) { return s.tree().node_count(); })
      .def("train",
           [](LZTransformSpa& s, const std::vector<Symbol>& tokens, std::size_t epochs) {
             s.train(to_sequence(tokens, s.alphabet_size()), epochs);
           },
           py::arg("tokens"), py::arg("epochs") = 1)
      .def("freeze", &LZTransformSpa::freeze)
      .def("set_gamma", &LZTransformSpa::set_gamma)
      .def("begin_sequence", &LZTransformSpa::begin_sequence)
      .def("observe", &LZTransformSpa::observe)
      .def("prob", &LZTransformSpa::prob)
      .def("next_dist",
           [](const LZTransformSpa& s) {
             const Pmf p = s.next_dist();
             return std::vector<double>(p.probs().begin(), p.probs().end());
           })
      .def("log_loss",
           [](LZTransformSpa& s, const std::vector<Symbol>& tokens) {
             const Sequence seq = to_sequence(tokens, s.alphabet_size());
             return loss_dict(s.frozen() ? s.evaluate_frozen(seq) : s.evaluate_log_loss(seq));
           })
      .def("model_hash", &LZTransformSpa::model_hash)
      .def("save", [](const LZTransformSpa& s) { return to_py(s.save()); })
      .def_static("load", [](const py::bytes& b) { return LZTransformSpa::load(as_bytes(b)); });

  m.def(
      "compress",
      [](const std::vector<Symbol>& tokens, std::size_t alphabet_size, double gamma) {
        return to_py(to_bytes(compress_adaptive(to_sequence(tokens, alphabet_size), gamma)));
      },
      py::arg("tokens"), py::arg("alphabet_size"), py::arg("gamma") = 0.5);
  m.def("decompress", [](const py::bytes& b) {
    const Sequence seq = decompress(from_bytes(as_bytes(b)));
    return std::vector<Symbol>(seq.tokens().begin(), seq.tokens().end());
  });

  py::class_<ClassifierModel>(m, "Classifier")
      .def_static(
          "fit",
          [](const std::vector<std::pair<std::vector<Symbol>, std::string>>& data, std::size_t alphabet_size,
             double gamma, std::size_t epochs) {
            std::vector<LabeledSequence> train;
            for (const auto& [tokens, label] : data) train.push_back({to_sequence(tokens, alphabet_size), label});
            return ClassifierModel::fit(train, FitConfig{gamma, epochs});
          },
          py::arg("data"), py::arg("alphabet_size"), py::arg("gamma") = 0.1, py::arg("epochs") = 1)
      .def_property_readonly("labels", &ClassifierModel::labels)
      .def("classify",
           [](const ClassifierModel& c, const std::vector<Symbol>& tokens) {
             const Classification r = c.classify(to_sequence(tokens, c.alphabet_size()));
             return py::make_tuple(r.label, r.losses_bits);
           });

  m.def(
      "generate",
      [](const LZTransformSpa& model, std::size_t length, double temperature, std::size_t top_k,
         std::uint64_t seed, const std::vector<Symbol>& prompt, std::size_t min_context) {
        GenConfig gc;
        gc.length = length;
        gc.temperature = temperature;
        gc.top_k = top_k;
        gc.rng_seed = seed;
        gc.min_context = min_context;
        if (!prompt.empty()) gc.seed_data = to_sequence(prompt, model.alphabet_size());
        const GenerationResult r = generate(model, gc);
        return std::vector<Symbol>(r.output.tokens().begin(), r.output.tokens().end());
      },
      py::arg("model"), py::arg("length"), py::arg("temperature") = 1.0, py::arg("top_k") = 0,
      py::arg("seed") = 0, py::arg("prompt") = std::vector<Symbol>{}, py::arg("min_context") = 64);

  m.def(
      "filter",
      [](const std::vector<Symbol>& noisy, const std::vector<std::vector<double>>& channel,
         const std::vector<std::vector<double>>& loss, const std::string& regime, double gamma,
         std::size_t mc_samples, std::uint64_t seed) {
        const Channel ch(channel);
        LZTransformSpa spa(Alphabet(ch.output_size()), SpaFamily::dirichlet(gamma));
        DelayOptions opt;
        opt.mc_samples = mc_samples;
        opt.seed = seed;
        return run_filter(spa, ch, LossMatrix(loss), noisy, FilterRegime::parse(regime), opt).estimates;
      },
      py::arg("noisy"), py::arg("channel"), py::arg("loss"), py::arg("regime") = "causal",
      py::arg("gamma") = 0.5, py::arg("mc_samples") = 1000, py::arg("seed") = 0);

  m.def("wasserstein", [](const std::vector<double>& a, const std::vector<double>& b) {
    return wasserstein_1d(a, b);
  });
  m.def("exact_kl_iid", [](const std::vector<double>& pmf, const LZTransformSpa& model, std::size_t n) {
    return exact_kl(SourceSpec::iid(pmf), model, n);
  });
}
