#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrbench/catalog.hpp"
#include "mrbench/engine.hpp"
#include "mrbench/error.hpp"
#include "mrbench/llm.hpp"
#include "mrbench/rubric.hpp"
#include "mrbench/suts.hpp"

namespace py = pybind11;
using namespace mrbench;
using nlohmann::json;

namespace {

// Documents cross the boundary as JSON text; Python's json module does the rest.
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& obj) {
    return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Catalog open_catalog(const std::optional<std::string>& path) {
    return load_catalog(path ? std::filesystem::path(*path) : default_catalog_path());
}

llm::Session open_session(const std::optional<std::string>& replay_dir) {
    auto cfg = llm::GatewayConfig::from_env();
    if (replay_dir) {
        cfg.replay_dir = *replay_dir;
        cfg.api_key.clear();
    }
    return llm::Session(cfg);
}

}  // namespace

PYBIND11_MODULE(_mrbench, m) {
    m.doc() = "Metamorphic testing workbench: campaigns, rubric scoring, LLM-assisted MR work";

    auto base = py::register_exception<Error>(m, "MrbenchError");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ReferenceError>(m, "ReferenceError", base);
    py::register_exception<PreconditionError>(m, "PreconditionError", base);
    py::register_exception<TransportError>(m, "TransportError", base);

    m.def("data_dir", [] { return default_data_dir().string(); });

    m.def("load_catalog", [](std::optional<std::string> path) { return to_py(catalog_to_json(open_catalog(path))); },
          py::arg("path") = py::none());

    m.def("executable_suts", [] { return suts::executable_sut_ids(); });

    m.def("variants", [](const std::string& sut) {
        std::vector<std::string> ids;
        for (const auto* v : suts::variants_for(sut)) ids.push_back(v->info.variant_id);
        return ids;
    });

    m.def("generate_source", [](const std::string& sut, std::uint64_t seed, std::uint64_t index) {
        return to_py(json(generate_source(sut, seed, index)));
    }, py::arg("sut"), py::arg("seed") = 0, py::arg("index") = 0);

    m.def("evaluate", [](const std::string& sut, const py::object& input, const std::string& variant) {
        const auto in = from_py(input).get<TestInput>();
        SutOutput out;
        {
            py::gil_scoped_release release;
            out = suts::get_variant(sut, variant)(in);
        }
        return to_py(json(out));
    }, py::arg("sut"), py::arg("input"), py::arg("variant") = suts::kReferenceVariant,
       "Runs one SUT variant on a JSON-shaped input");

    m.def("run_campaign",
          [](const std::string& sut, const std::string& variant, std::vector<std::string> mrs, std::uint64_t trials,
             std::uint64_t seed, std::optional<double> tolerance, std::size_t witnesses, unsigned threads,
             std::optional<std::string> catalog) {
              CampaignConfig cfg;
              cfg.sut_id = sut;
              cfg.variant_id = variant;
              cfg.mr_ids = std::move(mrs);
              cfg.trials = trials;
              cfg.seed = seed;
              cfg.tolerance_override = tolerance;
              cfg.witness_cap = witnesses;
              cfg.threads = threads;
              const auto c = open_catalog(catalog);
              json doc;
              {
                  py::gil_scoped_release release;
                  doc = campaign_to_json(cfg, run_campaign(c, cfg));
              }
              return to_py(doc);
          },
          py::arg("sut"), py::arg("variant") = suts::kReferenceVariant, py::arg("mrs") = std::vector<std::string>{},
          py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("tolerance") = py::none(), py::arg("witnesses") = 10,
          py::arg("threads") = 0, py::arg("catalog") = py::none());

    m.def("mutation_matrix",
          [](const std::string& sut, std::uint64_t trials, std::uint64_t seed, std::optional<std::string> catalog) {
              const auto c = open_catalog(catalog);
              json doc;
              {
                  py::gil_scoped_release release;
                  doc = kill_matrix_to_json(mutation_matrix(c, sut, trials, seed));
              }
              return to_py(doc);
          },
          py::arg("sut"), py::arg("trials") = 100, py::arg("seed") = 0, py::arg("catalog") = py::none());

    m.def("score", [](const py::object& sheet) { return score(from_py(sheet).get<RubricScoreSheet>()); });

    m.def("validate_sheet", [](const py::object& sheet) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : validate_score_sheet(from_py(sheet).get<RubricScoreSheet>()).violations)
            out.emplace_back(to_string(v.kind), v.message);
        return out;
    }, "List of (kind, message) pairs; empty when the sheet is valid");

    m.def("aggregate",
          [](std::vector<std::string> paths, const std::string& group_by, std::optional<std::string> catalog) {
              ScoreCorpus corpus;
              for (const auto& p : paths) {
                  auto part = load_score_dir(p);
                  corpus.sheets.insert(corpus.sheets.end(), part.sheets.begin(), part.sheets.end());
                  corpus.group_means.insert(corpus.group_means.end(), part.group_means.begin(), part.group_means.end());
              }
              const auto by = group_by_from_string(group_by);
              std::optional<Catalog> c;
              if (by == GroupBy::Category) c = open_catalog(catalog);
              return to_py(aggregate_to_json(aggregate(corpus, by, c ? &*c : nullptr)));
          },
          py::arg("paths"), py::arg("group_by") = "sut", py::arg("catalog") = py::none());

    m.def("generate_mrs",
          [](const std::string& sut, int count, std::optional<std::string> replay_dir, std::optional<std::string> catalog) {
              const auto c = open_catalog(catalog);
              const auto* d = c.find_sut(sut);
              if (!d) throw ReferenceError("unknown SUT '" + sut + "'");
              auto session = open_session(replay_dir);
              const auto r = llm::generate_mrs(*d, count, session);
              json drafts = json::array();
              for (const auto& x : r.drafts) drafts.push_back({{"index", x.index}, {"title", x.title}, {"narrative", x.narrative}});
              return to_py(drafts);
          },
          py::arg("sut"), py::arg("count") = 8, py::arg("replay_dir") = py::none(), py::arg("catalog") = py::none());

    m.def("evaluate_mr",
          [](const std::string& mr_id, std::optional<std::string> replay_dir, const std::string& created_at,
             std::optional<std::string> catalog) {
              const auto c = open_catalog(catalog);
              const auto* mr = c.find_mr(mr_id);
              if (!mr) throw ReferenceError("unknown MR '" + mr_id + "'");
              auto session = open_session(replay_dir);
              llm::EvaluationOptions opts;
              opts.created_at = created_at;
              return to_py(json(llm::evaluate_mr(*mr, c.find_sut(mr->sut_id), llm::EvaluatorPersona::standard(),
                                                 session, opts)));
          },
          py::arg("mr_id"), py::arg("replay_dir") = py::none(), py::arg("created_at") = "",
          py::arg("catalog") = py::none());
}
