#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "eqwalk/analysis.hpp"
#include "eqwalk/cli/run.hpp"
#include "eqwalk/errors.hpp"
#include "eqwalk/lattice.hpp"
#include "eqwalk/spectral.hpp"
#include "eqwalk/stats.hpp"
#include "eqwalk/walk.hpp"

namespace py = pybind11;
using namespace eqwalk;

namespace {

constexpr double kQuarter = std::numbers::pi / 4;

py::array_t<int> sites_of(const SiteWindow& w) {
  py::array_t<int> out(static_cast<py::ssize_t>(w.size()));
  auto v = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < w.size(); ++i) v(static_cast<py::ssize_t>(i)) = w.site(i);
  return out;
}

// Python side passes (sites, probabilities); sites must be contiguous and ascending.
Distribution to_distribution(const std::vector<int>& sites, const std::vector<double>& p) {
  if (sites.empty() || sites.size() != p.size()) {
    throw DomainError("sites and probabilities must be non-empty and of equal length");
  }
  for (std::size_t i = 1; i < sites.size(); ++i) {
    if (sites[i] != sites[i - 1] + 1) throw DomainError("sites must be consecutive integers");
  }
  return Distribution{SiteWindow(sites.front(), sites.back()), p, 0};
}

py::dict walk(double phi, int steps, double theta, double dephase_p, int site,
              std::pair<Complex, Complex> spinor) {
  if (steps < 0) throw DomainError("steps must be non-negative");
  const WalkParams params(phi, theta, dephase_p);
  const SiteWindow window = SiteWindow::for_walk(site, steps);
  const auto start = SpinorState::localized(site, Spinor{spinor.first, spinor.second}, window);

  py::array_t<double> probs({static_cast<py::ssize_t>(steps) + 1,
                             static_cast<py::ssize_t>(window.size())});
  auto view = probs.mutable_unchecked<2>();
  auto fill = [&](const Distribution& d, int t) {
    for (std::size_t i = 0; i < d.p.size(); ++i) view(t, static_cast<py::ssize_t>(i)) = d.p[i];
  };

  if (dephase_p > 0.0) {
    const auto rhos = evolve_density(DensityState::from_pure(start), params, steps);
    for (int t = 0; t <= steps; ++t) fill(position_distribution(rhos[t], t), t);
  } else {
    const auto states = evolve(start, params, steps);
    for (int t = 0; t <= steps; ++t) fill(position_distribution(states[t], t), t);
  }
  py::dict out;
  out["sites"] = sites_of(window);
  out["probabilities"] = probs;
  return out;
}

py::dict bands(long long n, long long m, double theta, int grid_points) {
  const BandStructure bs = band_structure(RationalPhase(n, m), theta, grid_points);
  py::array_t<double> phases({static_cast<py::ssize_t>(bs.kappa_grid.size()),
                              static_cast<py::ssize_t>(bs.band_count())});
  auto view = phases.mutable_unchecked<2>();
  for (std::size_t j = 0; j < bs.eigenphases.size(); ++j) {
    for (std::size_t b = 0; b < bs.band_count(); ++b) {
      view(static_cast<py::ssize_t>(j), static_cast<py::ssize_t>(b)) = bs.eigenphases[j][b];
    }
  }
  py::dict out;
  out["kappa"] = bs.kappa_grid;
  out["quasienergy"] = phases;
  out["flatness"] = band_flatness(bs);
  return out;
}

py::dict interval_dict(const IntervalEstimate& e) {
  py::dict d;
  d["p_hat"] = e.p_hat;
  d["lower"] = e.lower;
  d["upper"] = e.upper;
  d["confidence"] = e.confidence;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulation and analysis of 1-D electric quantum walks";
  m.attr("__version__") = cli::kToolVersion;

  // DomainError -> ValueError and WindowOverflow -> IndexError come for free.
  py::register_exception<FitError>(m, "FitError", PyExc_RuntimeError);
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);

  m.def("walk", &walk, py::arg("phi"), py::arg("steps"), py::arg("theta") = kQuarter,
        py::arg("dephase_p") = 0.0, py::arg("site") = 0,
        py::arg("spinor") = std::pair<Complex, Complex>{1.0, 0.0},
        "Position distributions for t = 0..steps. Returns {'sites', 'probabilities'}.");

  m.def("width_series", [](double phi, int t_max, double theta) {
        return width_series(WalkParams(phi, theta), t_max);
      },
      py::arg("phi"), py::arg("t_max"), py::arg("theta") = kQuarter);

  m.def("revival_peaks", [](const std::vector<double>& series) { return revival_peaks(series); },
        py::arg("return_series"));

  m.def("fit_two_sided_exponential",
        [](const std::vector<int>& sites, const std::vector<double>& p) {
          const ExpFitResult r = fit_two_sided_exponential(to_distribution(sites, p));
          py::dict d;
          d["xi"] = r.xi;
          d["amplitude"] = r.amplitude;
          d["r_squared"] = r.r_squared;
          d["decaying"] = r.decaying;
          return d;
        },
        py::arg("sites"), py::arg("probabilities"));

  m.def("tv_distance",
        [](const std::vector<int>& sites, const std::vector<double>& p,
           const std::vector<double>& q) {
          return tv_distance(to_distribution(sites, p), to_distribution(sites, q));
        },
        py::arg("sites"), py::arg("p"), py::arg("q"));

  m.def("distinguishing_steps",
        [](double phi1, double phi2, double threshold, int cap, double theta) {
          const auto r = distinguishing_steps(phi1, phi2, threshold, cap, theta);
          py::dict d;
          d["heuristic_steps"] = r.heuristic_steps;
          d["empirical_steps"] = r.empirical_steps;
          d["tv_curve"] = r.tv_curve;
          return d;
        },
        py::arg("phi1"), py::arg("phi2"), py::arg("threshold") = kDefaultDiscriminationThreshold,
        py::arg("cap") = 0, py::arg("theta") = kQuarter);

  m.def("convergents",
        [](double x, int depth) {
          std::vector<std::pair<long long, long long>> out;
          for (const auto& f : convergents(x, depth)) out.emplace_back(f.numerator, f.denominator);
          return out;
        },
        py::arg("x"), py::arg("depth"));

  m.def("dispersion_free", &dispersion_free, py::arg("k"), py::arg("theta") = kQuarter);
  m.def("group_velocity",
        [](double k, double theta, const std::string& band) {
          if (band != "+" && band != "-") throw DomainError("band must be '+' or '-'");
          return group_velocity(k, theta, band == "+" ? Band::Plus : Band::Minus);
        },
        py::arg("k"), py::arg("theta") = kQuarter, py::arg("band") = "+");

  m.def("band_structure", &bands, py::arg("n"), py::arg("m"), py::arg("theta") = kQuarter,
        py::arg("grid_points") = 64,
        "Quasi-energy bands for phi = 2 pi n / m: {'kappa', 'quasienergy', 'flatness'}.");
  m.def("band_flatness",
        [](long long n, long long mm, double theta, int grid_points) {
          return band_flatness(band_structure(RationalPhase(n, mm), theta, grid_points));
        },
        py::arg("n"), py::arg("m"), py::arg("theta") = kQuarter, py::arg("grid_points") = 64);
  m.def("velocity_multiset",
        [](long long n, long long mm, double theta, int grid_points) {
          return velocity_multiset(RationalPhase(n, mm), theta, grid_points);
        },
        py::arg("n"), py::arg("m"), py::arg("theta") = kQuarter, py::arg("grid_points") = 120);
  m.def("band_transfer",
        [](double k, double theta, double phi) {
          const auto r = band_transfer(k, theta, phi);
          py::dict d;
          d["k"] = r.k;
          d["before"] = r.populations_before;
          d["after"] = r.populations_after;
          return d;
        },
        py::arg("k"), py::arg("theta") = kQuarter, py::arg("phi") = std::numbers::pi);

  m.def("binomial_cdf", &binomial_cdf, py::arg("k"), py::arg("n"), py::arg("p"));
  m.def("clopper_pearson",
        [](long long k, long long n, double confidence) {
          return interval_dict(clopper_pearson(k, n, confidence));
        },
        py::arg("k"), py::arg("n"), py::arg("confidence") = 0.68);

  m.def("sample_measurements",
        [](const std::vector<int>& sites, const std::vector<double>& p, std::uint64_t shots,
           std::uint64_t seed, double detect_eff) {
          const CountsRecord rec = sample_measurements(to_distribution(sites, p), shots, seed,
                                                       detect_eff);
          py::dict d;
          d["counts"] = rec.counts;
          d["shots"] = rec.shots;
          d["lost"] = rec.lost;
          d["seed"] = rec.seed;
          return d;
        },
        py::arg("sites"), py::arg("probabilities"), py::arg("shots"), py::arg("seed"),
        py::arg("detect_eff") = 0.9);

  m.def("run_config",
        [](const std::string& path, std::optional<std::string> mode,
           std::optional<std::string> out, std::optional<std::string> format,
           std::optional<std::uint64_t> seed) {
          std::string diagnostic;
          const int code = cli::run(path, cli::Overrides{mode, out, format, seed}, diagnostic);
          return std::make_pair(code, diagnostic);
        },
        py::arg("path"), py::kw_only(), py::arg("mode") = py::none(),
        py::arg("out") = py::none(), py::arg("format") = py::none(),
        py::arg("seed") = py::none(),
        "Runs a config file like the command-line tool. Returns (exit_code, diagnostic).");
}
