// Python bindings for the percolation laboratory core.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "perclab/connectivity.hpp"
#include "perclab/correlation_length.hpp"
#include "perclab/curve_metric.hpp"
#include "perclab/interface_loops.hpp"
#include "perclab/regime_lab.hpp"
#include "perclab/sampler.hpp"

namespace py = pybind11;
using namespace perclab;

namespace {

Window make_window(int64_t li, int64_t lj, double delta) {
  return Window{{0, 0}, li, lj, delta};
}

// Vertices of a traced interface as an (n, 2) float array.
py::array_t<double> loop_vertices(const BoundaryLoop& loop) {
  py::array_t<double> out({py::ssize_t(loop.vertices.size()), py::ssize_t(2)});
  auto v = out.mutable_unchecked<2>();
  for (py::ssize_t k = 0; k < py::ssize_t(loop.vertices.size()); ++k) {
    v(k, 0) = loop.vertices[size_t(k)].x;
    v(k, 1) = loop.vertices[size_t(k)].y;
  }
  return out;
}

Curve curve_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> pts,
                       bool closed) {
  if (pts.ndim() != 2 || pts.shape(1) != 2)
    throw std::invalid_argument("curve: expected an (n, 2) array");
  Curve c;
  c.closed = closed;
  auto v = pts.unchecked<2>();
  for (py::ssize_t k = 0; k < pts.shape(0); ++k)
    c.vertices.push_back(CPoint{v(k, 0), v(k, 1), false});
  if (closed && !c.vertices.empty() &&
      !(c.vertices.front() == c.vertices.back()))
    c.vertices.push_back(c.vertices.front());
  return c;
}

}  // namespace

PYBIND11_MODULE(_perclab, m) {
  m.doc() = "Site percolation on the triangular lattice: sampling, interface "
            "loops, correlation-length estimators, regime sweeps, and the "
            "compactified-plane curve metric.";

  py::class_<Window>(m, "Window")
      .def(py::init(&make_window), py::arg("li"), py::arg("lj"),
           py::arg("delta") = 1.0)
      .def_readonly("li", &Window::li)
      .def_readonly("lj", &Window::lj)
      .def_readonly("delta", &Window::delta)
      .def_property_readonly("site_count", &Window::site_count);

  py::class_<PercConfig>(m, "Config")
      .def_property_readonly("window", [](const PercConfig& c) { return c.window; })
      .def_readonly("p", &PercConfig::p)
      .def_readonly("seed", &PercConfig::seed)
      .def_readonly("replica", &PercConfig::replica)
      .def("white_at", &PercConfig::white_at, py::arg("index"))
      .def("to_bytes", [](const PercConfig& c) {
        std::ostringstream os(std::ios::binary);
        dump_config(c, os);
        return py::bytes(os.str());
      });

  m.def("sample", &sample, py::arg("window"), py::arg("p"), py::arg("seed"),
        py::arg("replica") = 0,
        "Sample one coloring; each site is a pure function of (seed, "
        "replica, site index).");
  m.def("load_config", [](py::bytes blob) {
    std::istringstream is(std::string(blob), std::ios::binary);
    return load_config(is);
  });

  py::class_<EventStats>(m, "EventStats")
      .def_readonly("event", &EventStats::event)
      .def_readonly("hits", &EventStats::hits)
      .def_readonly("replicas", &EventStats::replicas)
      .def_readonly("p_hat", &EventStats::p_hat)
      .def_readonly("ci95", &EventStats::ci95)
      .def_readonly("truncated", &EventStats::truncated)
      .def("__repr__", [](const EventStats& s) {
        return "EventStats(" + s.event + ", p_hat=" + std::to_string(s.p_hat) + ")";
      });

  m.def(
      "horizontal_crossing",
      [](const PercConfig& c, int64_t n, bool white) {
        return horizontal_crossing(c, n, white ? Color::White : Color::Black);
      },
      py::arg("config"), py::arg("n"), py::arg("white") = true,
      "White (or black) left-right crossing of the canonical n-box.");
  m.def("crossing_prob", &crossing_prob, py::arg("n"), py::arg("p"),
        py::arg("replicas"), py::arg("seed"), py::arg("workers") = 1);

  py::class_<BoundaryLoop>(m, "Loop")
      .def_readonly("closed", &BoundaryLoop::closed)
      .def_readonly("diameter", &BoundaryLoop::diameter)
      .def_readonly("touches_window_boundary", &BoundaryLoop::touches_window_boundary)
      .def_property_readonly("n_edges", &BoundaryLoop::n_edges)
      .def_property_readonly("vertices", &loop_vertices);

  py::class_<LoopSet>(m, "LoopSet")
      .def_readonly("loops", &LoopSet::loops)
      .def_readonly("open_fragments", &LoopSet::open_fragments)
      .def_readonly("p", &LoopSet::p)
      .def_readonly("delta", &LoopSet::delta);

  m.def("trace_loops", &trace_loops, py::arg("config"),
        py::arg("closed_mode") = false,
        "Trace every black/white interface; boundary-clipped interfaces "
        "become open fragments.");

  py::class_<ProbeLog>(m, "ProbeLog")
      .def_readonly("phase", &ProbeLog::phase)
      .def_readonly("x", &ProbeLog::x)
      .def_readonly("hits", &ProbeLog::hits)
      .def_readonly("replicas", &ProbeLog::replicas)
      .def_readonly("p_hat", &ProbeLog::p_hat)
      .def_readonly("ci95", &ProbeLog::ci95)
      .def_readonly("decision", &ProbeLog::decision);

  py::class_<SearchBudget>(m, "SearchBudget")
      .def(py::init([](uint64_t init, uint64_t max_reps, double rtol) {
             return SearchBudget{init, max_reps, rtol};
           }),
           py::arg("replicas_init") = 256, py::arg("replicas_max") = 32768,
           py::arg("bracket_rtol") = 0.0)
      .def_readwrite("replicas_init", &SearchBudget::replicas_init)
      .def_readwrite("replicas_max", &SearchBudget::replicas_max)
      .def_readwrite("bracket_rtol", &SearchBudget::bracket_rtol);

  py::class_<CorrEstimate>(m, "CorrEstimate")
      .def_readonly("p", &CorrEstimate::p)
      .def_readonly("epsilon", &CorrEstimate::epsilon)
      .def_readonly("n_hat", &CorrEstimate::n_hat)
      .def_readonly("n_low", &CorrEstimate::n_low)
      .def_readonly("n_high", &CorrEstimate::n_high)
      .def_readonly("exceeds_n_max", &CorrEstimate::exceeds_n_max)
      .def_readonly("confident", &CorrEstimate::confident)
      .def_readonly("probes", &CorrEstimate::probes);

  py::class_<PPlusEstimate>(m, "PPlusEstimate")
      .def_readonly("n", &PPlusEstimate::n)
      .def_readonly("epsilon", &PPlusEstimate::epsilon)
      .def_readonly("p_hat", &PPlusEstimate::p_hat)
      .def_readonly("p_low", &PPlusEstimate::p_low)
      .def_readonly("p_high", &PPlusEstimate::p_high)
      .def_readonly("confident", &PPlusEstimate::confident)
      .def_readonly("probes", &PPlusEstimate::probes);

  m.def("estimate_L", &estimate_L, py::arg("p"), py::arg("epsilon"),
        py::arg("n_max"), py::arg("budget") = SearchBudget{}, py::arg("seed") = 0,
        py::arg("workers") = 1,
        "Smallest box side whose white crossing probability exceeds "
        "1/2 + epsilon, with a certified bracket.");
  m.def("estimate_p_plus", &estimate_p_plus, py::arg("n"), py::arg("epsilon"),
        py::arg("p_tol"), py::arg("budget") = SearchBudget{}, py::arg("seed") = 0,
        py::arg("workers") = 1);

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("exponent", &PowerLawFit::exponent)
      .def_readonly("intercept", &PowerLawFit::intercept)
      .def_readonly("r_squared", &PowerLawFit::r_squared);

  m.def(
      "fit_power_law",
      [](const std::vector<std::pair<double, double>>& pts) {
        return fit_power_law(pts);
      },
      py::arg("points"), "Least-squares line through (log(p - 1/2), log L).");

  py::enum_<Verdict>(m, "Verdict")
      .value("Trivial", Verdict::Trivial)
      .value("Critical", Verdict::Critical)
      .value("NearCritical", Verdict::NearCritical)
      .value("Undetermined", Verdict::Undetermined);

  py::class_<ScaledBracket>(m, "ScaledBracket")
      .def(py::init([](double lo, double hi, bool confident) {
             return ScaledBracket{lo, hi, confident};
           }),
           py::arg("lo"), py::arg("hi"), py::arg("confident") = true)
      .def_readonly("lo", &ScaledBracket::lo)
      .def_readonly("hi", &ScaledBracket::hi)
      .def_readonly("confident", &ScaledBracket::confident);

  py::class_<LevelReport>(m, "LevelReport")
      .def_readonly("delta", &LevelReport::delta)
      .def_readonly("p", &LevelReport::p)
      .def_readonly("corr", &LevelReport::corr)
      .def_readonly("scaled", &LevelReport::scaled)
      .def_readonly("macro_loop", &LevelReport::macro_loop)
      .def_readonly("loop_exists", &LevelReport::loop_exists)
      .def_readonly("f_k_index", &LevelReport::f_k_index)
      .def_readonly("f_k", &LevelReport::f_k)
      .def_readonly("g_grid", &LevelReport::g_grid)
      .def_readonly("g_conditional", &LevelReport::g_conditional)
      .def_readonly("g_unconditional", &LevelReport::g_unconditional)
      .def_readonly("none_count", &LevelReport::none_count)
      .def_readonly("truncated", &LevelReport::truncated)
      .def_readonly("truncation_rate", &LevelReport::truncation_rate)
      .def_readonly("aborted", &LevelReport::aborted);

  py::class_<RegimeReport>(m, "RegimeReport")
      .def_readonly("verdict", &RegimeReport::verdict)
      .def_readonly("levels", &RegimeReport::levels);

  m.def(
      "run_sweep",
      [](double alpha, double lambda, std::vector<double> deltas,
         std::vector<double> p_override, double epsilon, double window,
         uint64_t replicas, uint64_t seed, double t_low, double t_high,
         const SearchBudget& budget, int workers) {
        SweepSpec spec;
        spec.alpha = alpha;
        spec.lambda = lambda;
        spec.deltas = std::move(deltas);
        spec.p_override = std::move(p_override);
        spec.epsilon = epsilon;
        spec.window_side = window;
        spec.replicas = replicas;
        spec.seed = seed;
        spec.t_low = t_low;
        spec.t_high = t_high;
        spec.budget = budget;
        spec.workers = workers;
        return run_sweep(spec);
      },
      py::arg("alpha"), py::arg("lambda_"), py::arg("deltas"),
      py::arg("p_override") = std::vector<double>{}, py::arg("epsilon") = 0.1,
      py::arg("window") = 1.0, py::arg("replicas") = 2000, py::arg("seed") = 0,
      py::arg("t_low") = 0.3, py::arg("t_high") = 3.0,
      py::arg("budget") = SearchBudget{}, py::arg("workers") = 1,
      "Sweep p_j = 1/2 + lambda * delta_j^alpha over decreasing spacings and "
      "classify the regime.");
  m.def(
      "classify",
      [](const std::vector<ScaledBracket>& brackets, double t_low, double t_high) {
        return classify(brackets, t_low, t_high);
      },
      py::arg("brackets"), py::arg("t_low") = 0.3, py::arg("t_high") = 3.0);
  m.def("near_critical_band", &near_critical_band, py::arg("delta"),
        py::arg("eps1"), py::arg("eps2"), py::arg("budget") = SearchBudget{},
        py::arg("seed") = 0, py::arg("workers") = 1);

  m.def(
      "delta_dist",
      [](double x1, double y1, double x2, double y2) {
        return delta_dist(CPoint{x1, y1, false}, CPoint{x2, y2, false});
      },
      py::arg("x1"), py::arg("y1"), py::arg("x2"), py::arg("y2"),
      "Metric of the compactified plane between two finite points.");
  m.def("dist_to_infinity", [](double x, double y) {
    return delta_dist(CPoint{x, y, false}, CPoint::infinity());
  });
  m.def(
      "curve_dist",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> a,
         py::array_t<double, py::array::c_style | py::array::forcecast> b,
         double h, bool a_closed, bool b_closed) {
        return curve_dist(curve_from_array(a, a_closed),
                          curve_from_array(b, b_closed), h);
      },
      py::arg("a"), py::arg("b"), py::arg("h") = 0.05,
      py::arg("a_closed") = false, py::arg("b_closed") = false,
      "Frechet-type distance between two polylines given as (n, 2) arrays.");
  m.def(
      "set_dist",
      [](const std::vector<py::array_t<double, py::array::c_style |
                                                   py::array::forcecast>>& fs,
         const std::vector<py::array_t<double, py::array::c_style |
                                                   py::array::forcecast>>& gs,
         double h) {
        CurveSet F, G;
        for (const auto& a : fs) F.curves.push_back(curve_from_array(a, false));
        for (const auto& b : gs) G.curves.push_back(curve_from_array(b, false));
        return set_dist(F, G, h);
      },
      py::arg("f"), py::arg("g"), py::arg("h") = 0.05,
      "Hausdorff distance between two curve collections.");
}
