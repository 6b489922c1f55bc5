#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vcp/agents.hpp"
#include "vcp/config.hpp"
#include "vcp/error.hpp"
#include "vcp/federation.hpp"
#include "vcp/harness.hpp"
#include "vcp/quadtree.hpp"
#include "vcp/sensing.hpp"

namespace py = pybind11;
using namespace vcp;

namespace {

Grid2D<CellState> to_grid(const std::vector<std::vector<int>>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = h ? static_cast<int>(rows[0].size()) : 0;
  Grid2D<CellState> g(w, h, CellState::Unknown);
  for (int y = 0; y < h; ++y) {
    if (static_cast<int>(rows[static_cast<std::size_t>(y)].size()) != w) throw DimensionError("ragged grid");
    for (int x = 0; x < w; ++x) {
      const int v = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      if (v < 0 || v > 2) throw RangeError("cell states are 0 (free), 1 (occupied) or 2 (unknown)");
      g.at(x, y) = static_cast<CellState>(v);
    }
  }
  return g;
}

std::vector<std::vector<int>> from_grid(const Grid2D<CellState>& g) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(g.height()));
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) rows[static_cast<std::size_t>(y)].push_back(static_cast<int>(g.at(x, y)));
  return rows;
}

}  // namespace

PYBIND11_MODULE(_vcp, m) {
  m.doc() = "Vehicular cooperative perception simulator";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<GuardExceeded>(m, "GuardExceeded", base.ptr());
  py::register_exception<ConstraintViolation>(m, "ConstraintViolation", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());

  m.def("occupancy_probability", [](int state, double reliability) {
    return occupancy_probability(static_cast<CellState>(state), reliability);
  });
  m.def("cell_value", &cell_value, py::arg("p"), py::arg("age_s"), py::arg("mu") = 0.9);
  m.def("modified_interest", &modified_interest, py::arg("w"), py::arg("q"));

  m.def("quadtree_candidate_cap", &quadtree_candidate_cap);
  m.def(
      "quadtree_leaves",
      [](const std::vector<std::vector<int>>& grid, int max_level) {
        const auto t = QuadTree::decompose(to_grid(grid), max_level);
        std::vector<py::dict> out;
        for (const auto& b : t.leaves()) {
          py::dict d;
          d["level"] = b.level;
          d["path"] = b.path_string();
          d["x"] = b.qx;
          d["y"] = b.qy;
          d["side"] = b.side;
          d["state"] = static_cast<int>(b.state);
          out.push_back(d);
        }
        return out;
      },
      "Leaves of the region quadtree of a 2^L x 2^L grid (row-major lists).");
  m.def("quadtree_roundtrip", [](const std::vector<std::vector<int>>& grid, int max_level) {
    return from_grid(QuadTree::decompose(to_grid(grid), max_level).recompose());
  });

  m.def("pairing_count", &pairing_count);
  m.def("pairing_branch_sizes", &pairing_branch_sizes);
  m.def("decode_pairing", [](const std::vector<int>& a, int n) { return pairs_of(decode_pairing(a, n)); });

  m.def("fedavg", [](const std::vector<std::vector<float>>& models) { return aggregate(models); });
  m.def("moving_average", &moving_average, py::arg("values"), py::arg("window"));

  m.def("desk_config", [] { return config_to_json(desk_config()); }, "Desk preset as a JSON string.");
  m.def("full_config", [] { return config_to_json(full_config()); }, "Full-scale preset as a JSON string.");
  m.def(
      "validate_config",
      [](const std::string& text) {
        const auto c = config_from_json(text, desk_config());
        validate(c);
        return config_to_json(c);
      },
      "Applies a flat JSON override to the desk preset, validates it and returns the full config.");

  m.def(
      "train",
      [](const std::string& text, const std::string& out_dir) {
        const auto c = config_from_json(text, desk_config());
        validate(c);
        const auto trace = training_trace(c);
        auto agents = AgentSet::create(c);
        TrainReport r;
        {
          py::gil_scoped_release release;
          r = run_training(c, trace, agents, out_dir);
        }
        py::dict d;
        d["episode_reward"] = r.episode_reward;
        std::vector<double> evals;
        for (const auto& e : r.evals) evals.push_back(e.vehicle_reward);
        d["eval_reward"] = evals;
        d["vehicle_steps"] = r.vehicle_steps;
        d["fed_rounds"] = static_cast<int>(r.fed_rounds.size());
        return d;
      },
      py::arg("config_json") = "{}", py::arg("out_dir") = "");
}
