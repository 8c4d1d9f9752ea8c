#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wcoh/coherence.hpp"
#include "wcoh/config.hpp"
#include "wcoh/csv.hpp"
#include "wcoh/errors.hpp"
#include "wcoh/grid_io.hpp"
#include "wcoh/pipeline.hpp"
#include "wcoh/render.hpp"
#include "wcoh/significance.hpp"
#include "wcoh/version.hpp"

namespace py = pybind11;
using namespace wcoh;

namespace {

template <typename T>
py::array_t<T> vector_to_numpy(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

template <typename T>
py::array_t<T> grid_to_numpy(const Grid<T>& g) {
  py::array_t<T> out({static_cast<py::ssize_t>(g.rows()), static_cast<py::ssize_t>(g.cols())});
  std::copy(g.data().begin(), g.data().end(), out.mutable_data());
  return out;
}

std::vector<double> numpy_to_vector(const py::array_t<double, py::array::c_style |
                                                                  py::array::forcecast>& a) {
  if (a.ndim() != 1) throw config_error("expected a 1-D array");
  return {a.data(), a.data() + a.shape(0)};
}

TimeSeries make_series(const std::string& name, const std::string& start_iso,
                       const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
  TimeSeries ts{name, Date::parse(start_iso), 1.0, numpy_to_vector(v)};
  ts.validate();
  return ts;
}

Padding padding_from_name(const std::string& name) {
  if (name == "pow2") return Padding::pow2;
  if (name == "extended") return Padding::extended;
  if (name == "none") return Padding::none;
  throw config_error("padding must be 'pow2', 'extended' or 'none', got '" + name + "'");
}

DeriveKind derive_kind_from_name(const std::string& name) {
  if (name == "ratio") return DeriveKind::ratio;
  if (name == "per_event_price") return DeriveKind::per_event_price;
  throw config_error("derive kind must be 'ratio' or 'per_event_price', got '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(wcoh, m) {
  m.doc() = "Wavelet coherence toolkit: Morlet CWT, cross/partial coherence, "
            "red-noise Monte Carlo significance, and the series preparation steps.";
  m.attr("__version__") = kVersion;

  py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<data_error>(m, "DataError", PyExc_ValueError);

  py::class_<TimeSeries>(m, "TimeSeries")
      .def(py::init(&make_series), py::arg("name"), py::arg("start_date"), py::arg("values"))
      .def_readwrite("name", &TimeSeries::name)
      .def_property_readonly("start_date", [](const TimeSeries& ts) { return ts.start.iso(); })
      .def_property_readonly("end_date", [](const TimeSeries& ts) { return ts.last().iso(); })
      .def_property_readonly("values",
                             [](const TimeSeries& ts) { return vector_to_numpy(ts.values); })
      .def("__len__", &TimeSeries::size)
      .def("__repr__", [](const TimeSeries& ts) {
        return "TimeSeries('" + ts.name + "', " + ts.start.iso() + ", n=" +
               std::to_string(ts.size()) + ")";
      });

  py::class_<TrendsBlock>(m, "TrendsBlock")
      .def(py::init([](const std::string& start_iso,
                       const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
             return TrendsBlock{Date::parse(start_iso), 1.0, numpy_to_vector(v)};
           }),
           py::arg("start_date"), py::arg("values"))
      .def_property_readonly("start_date", [](const TrendsBlock& b) { return b.start.iso(); })
      .def_property_readonly("values",
                             [](const TrendsBlock& b) { return vector_to_numpy(b.values); });

  py::class_<ScaleGrid>(m, "ScaleGrid")
      .def_readonly("n", &ScaleGrid::n)
      .def_readonly("dt", &ScaleGrid::dt)
      .def_readonly("s0", &ScaleGrid::s0)
      .def_readonly("dj", &ScaleGrid::dj)
      .def_readonly("fourier_factor", &ScaleGrid::fourier_factor)
      .def_property_readonly("scales",
                             [](const ScaleGrid& g) { return vector_to_numpy(g.scales); })
      .def_property_readonly("periods",
                             [](const ScaleGrid& g) { return vector_to_numpy(g.periods()); })
      .def("__len__", &ScaleGrid::count);

  py::class_<CwtMatrix>(m, "CwtMatrix")
      .def_property_readonly("coefficients",
                             [](const CwtMatrix& w) { return grid_to_numpy(w.coefficients); })
      .def_property_readonly("coi", [](const CwtMatrix& w) { return vector_to_numpy(w.coi); })
      .def_readonly("grid", &CwtMatrix::grid)
      .def_readonly("source_names", &CwtMatrix::source_names)
      .def_property_readonly("start_date", [](const CwtMatrix& w) { return w.start.iso(); });

  py::class_<CoherenceMap>(m, "CoherenceMap")
      .def_property_readonly("kind",
                             [](const CoherenceMap& c) { return map_kind_name(c.kind); })
      .def_property_readonly("values",
                             [](const CoherenceMap& c) { return grid_to_numpy(c.values); })
      .def_property_readonly("phase",
                             [](const CoherenceMap& c) { return grid_to_numpy(c.phase); })
      .def_property_readonly("masked",
                             [](const CoherenceMap& c) { return grid_to_numpy(c.masked); })
      .def_property_readonly("coi", [](const CoherenceMap& c) { return vector_to_numpy(c.coi); })
      .def_readonly("grid", &CoherenceMap::grid)
      .def_readonly("source_names", &CoherenceMap::source_names)
      .def_readonly("clip_count", &CoherenceMap::clip_count)
      .def_property_readonly("start_date", [](const CoherenceMap& c) { return c.start.iso(); });

  py::class_<Ar1Model>(m, "Ar1Model")
      .def(py::init([](double phi, double sigma, double mean) {
             Ar1Model model{phi, sigma, mean};
             model.validate();
             return model;
           }),
           py::arg("phi"), py::arg("sigma"), py::arg("mean") = 0.0)
      .def_readonly("phi", &Ar1Model::phi)
      .def_readonly("sigma", &Ar1Model::sigma)
      .def_readonly("mean", &Ar1Model::mean)
      .def("__repr__", [](const Ar1Model& a) {
        return "Ar1Model(phi=" + std::to_string(a.phi) + ", sigma=" + std::to_string(a.sigma) +
               ", mean=" + std::to_string(a.mean) + ")";
      });

  py::class_<AnalysisConfig>(m, "AnalysisConfig")
      .def(py::init([](const py::kwargs& kwargs) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& item : kwargs) {
          const std::string key = py::cast<std::string>(item.first);
          const py::handle v = item.second;
          if (py::isinstance<py::bool_>(v)) j[key] = py::cast<bool>(v);
          else if (py::isinstance<py::int_>(v)) j[key] = py::cast<std::int64_t>(v);
          else if (py::isinstance<py::float_>(v)) j[key] = py::cast<double>(v);
          else j[key] = py::cast<std::string>(v);
        }
        return config_from_json(j);
      }))
      .def("to_dict",
           [](const AnalysisConfig& cfg) {
             py::object loads = py::module_::import("json").attr("loads");
             return loads(config_to_json(cfg).dump());
           })
      .def("__repr__",
           [](const AnalysisConfig& cfg) { return "AnalysisConfig(" + config_to_json(cfg).dump() + ")"; });

  py::class_<SignificanceResult>(m, "SignificanceResult")
      .def_property_readonly("mode",
                             [](const SignificanceResult& s) {
                               return s.mode == SigMode::per_scale ? "per_scale" : "per_cell";
                             })
      .def_readonly("level", &SignificanceResult::level)
      .def_readonly("nsims", &SignificanceResult::nsims)
      .def_readonly("seed", &SignificanceResult::seed)
      .def_property_readonly("scale_threshold",
                             [](const SignificanceResult& s) {
                               return vector_to_numpy(s.scale_threshold);
                             })
      .def_property_readonly("cell_threshold",
                             [](const SignificanceResult& s) {
                               return grid_to_numpy(s.cell_threshold);
                             })
      .def_property_readonly("mask",
                             [](const SignificanceResult& s) { return grid_to_numpy(s.mask); })
      .def_readonly("significant_coi_fraction", &SignificanceResult::significant_coi_fraction);

  m.def("load_csv",
        [](const std::string& path, const std::string& date_column,
           const std::string& value_column, const std::string& fill) {
          return load_csv(path, date_column, value_column,
                          fill == "forward" ? FillPolicy::forward : FillPolicy::none);
        },
        py::arg("path"), py::arg("date_column") = "date", py::arg("value_column") = "value",
        py::arg("fill") = "none");
  m.def("write_csv",
        [](const TimeSeries& ts, const std::string& path) { write_csv(ts, path); },
        py::arg("series"), py::arg("path"));
  m.def("align_intersect", &align_intersect, py::arg("a"), py::arg("b"),
        "Restrict both series to the intersection of their date ranges.");
  m.def("quantile_transform", &quantile_transform, py::arg("series"),
        "Rank transform to (0,1) with average ranks for ties.");
  m.def("chain_trends_blocks", &chain_trends_blocks, py::arg("blocks"),
        py::arg("overlap_window") = 30);
  m.def("derive_series",
        [](const std::string& kind, const TimeSeries& a, const TimeSeries& b) {
          return derive_series(derive_kind_from_name(kind), a, b);
        },
        py::arg("kind"), py::arg("a"), py::arg("b"));

  m.def("build_scale_grid",
        [](std::size_t n, double dt, double s0, double dj, double max_period_fraction,
           double omega0) {
          return build_scale_grid(n, dt, s0, dj, max_period_fraction, WaveletSpec{omega0});
        },
        py::arg("n"), py::arg("dt") = 1.0, py::arg("s0") = 2.0, py::arg("dj") = 1.0 / 12.0,
        py::arg("max_period_fraction") = 1.0, py::arg("omega0") = 6.0);
  m.def("morlet_fourier",
        [](double omega, double scale, double omega0, double dt) {
          return morlet_fourier(omega, scale, WaveletSpec{omega0}, dt);
        },
        py::arg("omega"), py::arg("scale"), py::arg("omega0") = 6.0, py::arg("dt") = 1.0);
  m.def("cone_of_influence", &cone_of_influence, py::arg("n"), py::arg("dt"),
        py::arg("fourier_factor"));
  m.def("cwt_transform",
        [](const TimeSeries& ts, const ScaleGrid& grid, double omega0, const std::string& padding,
           bool detrend) {
          return cwt_transform(ts, grid, WaveletSpec{omega0}, padding_from_name(padding), detrend);
        },
        py::arg("series"), py::arg("grid"), py::arg("omega0") = 6.0, py::arg("padding") = "pow2",
        py::arg("detrend") = false);

  m.def("wtc",
        [](const CwtMatrix& wx, const CwtMatrix& wy, double time_bandwidth, double scale_octaves) {
          return wtc(wx, wy, SmoothingSpec{time_bandwidth, scale_octaves});
        },
        py::arg("wx"), py::arg("wy"), py::arg("time_bandwidth") = 1.0,
        py::arg("scale_octaves") = 0.6);
  m.def("pwc",
        [](const CwtMatrix& wy, const CwtMatrix& wx1, const CwtMatrix& wx2, double time_bandwidth,
           double scale_octaves) {
          return pwc(wy, wx1, wx2, SmoothingSpec{time_bandwidth, scale_octaves});
        },
        py::arg("wy"), py::arg("wx1"), py::arg("wx2"), py::arg("time_bandwidth") = 1.0,
        py::arg("scale_octaves") = 0.6);
  m.def("xwt_power", &xwt_power, py::arg("wx"), py::arg("wy"));

  m.def("fit_ar1", &fit_ar1, py::arg("series"));
  m.def("simulate_ar1",
        [](const Ar1Model& model, std::size_t n, std::uint64_t seed, std::uint64_t stream,
           std::optional<double> x0) {
          return simulate_ar1(model, n, rng::Stream{seed, stream}, x0);
        },
        py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0,
        py::arg("x0") = std::nullopt);
  m.def("mc_threshold", &mc_threshold, py::arg("observed"), py::arg("models"), py::arg("config"),
        "Monte Carlo red-noise significance for a wtc/pwc map.");
  m.def("coi_interior_mask",
        [](const CoherenceMap& map) { return grid_to_numpy(coi_interior_mask(map.grid, map.coi)); },
        py::arg("map"));

  m.def("export_grid",
        [](const CoherenceMap& map, const std::string& path, const std::string& format,
           const SignificanceResult* sig) {
          export_grid(map, sig, path, format == "csv" ? GridFormat::csv : GridFormat::json);
        },
        py::arg("map"), py::arg("path"), py::arg("format") = "json",
        py::arg("significance") = nullptr);
  m.def("import_grid_json",
        [](const std::string& path) { return import_grid_json(path); }, py::arg("path"));
  m.def("render_svg",
        [](const CoherenceMap& map, const SignificanceResult* sig, const std::string& palette,
           double arrow_min, const std::string& convention, std::size_t width,
           std::size_t height) {
          RenderOptions opts;
          opts.color_map = palette;
          opts.arrow_min_coherence = arrow_min;
          opts.lead_convention = convention == "math_angle" ? LeadConvention::math_angle
                                                            : LeadConvention::paper_downleads;
          opts.width = width;
          opts.height = height;
          return render_map_svg(map, sig, opts);
        },
        py::arg("map"), py::arg("significance") = nullptr, py::arg("palette") = "hot",
        py::arg("arrow_min") = 0.5, py::arg("convention") = "paper_downleads",
        py::arg("width") = 960, py::arg("height") = 640);

  m.def("run_pair",
        [](const std::string& x_path, const std::string& y_path, const AnalysisConfig& cfg,
           const std::string& out_dir, const std::string& label) {
          const RunResult r = run_pair(x_path, y_path, cfg, out_dir, label);
          return py::make_tuple(r.map, r.significance, r.bundle_dir.string());
        },
        py::arg("x_path"), py::arg("y_path"), py::arg("config"), py::arg("out_dir"),
        py::arg("label") = "",
        "End-to-end pipeline; returns (map, significance, bundle_dir).");
}
