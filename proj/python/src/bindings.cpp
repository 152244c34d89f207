#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rwc/calibrators.hpp"
#include "rwc/error.hpp"
#include "rwc/evaluation.hpp"
#include "rwc/forecasters.hpp"
#include "rwc/regime.hpp"
#include "rwc/synth.hpp"
#include "rwc/weighting.hpp"
#include "rwc/wquantile.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

std::vector<int> to_ints(const IntArray& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return {a.data(), a.data() + a.size()};
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict lr_dict(const rwc::LrTest& t) {
  py::dict d;
  d["lr"] = t.lr;
  d["p"] = t.p;
  return d;
}

py::dict weights_dict(const rwc::WeightVector& wv) {
  py::dict d;
  d["indices"] = to_array(wv.indices);
  d["unnormalized"] = to_array(wv.unnormalized);
  d["normalized"] = to_array(wv.normalized);
  d["total"] = wv.total;
  d["n_eff"] = wv.n_eff;
  d["tau"] = wv.tau;
  return d;
}

std::vector<std::size_t> to_indices(const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& a) {
  std::vector<std::size_t> out;
  out.reserve(a.size());
  for (py::ssize_t i = 0; i < a.size(); ++i) {
    if (a.data()[i] < 0) throw py::value_error("indices must be non-negative");
    out.push_back(static_cast<std::size_t>(a.data()[i]));
  }
  return out;
}

std::vector<rwc::RegimePoint> to_points(const Array& z) {
  if (z.ndim() != 2 || z.shape(1) != 2) throw py::value_error("expected an (n, 2) array");
  std::vector<rwc::RegimePoint> out(static_cast<std::size_t>(z.shape(0)));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {z.data()[2 * i], z.data()[2 * i + 1]};
  return out;
}

py::dict calibrate(const Array& returns_in, const std::string& method, std::optional<Array> qhat_in,
                   std::size_t eval_start, std::optional<std::size_t> stats_end, double alpha, std::size_t m,
                   double lambda, double h, std::size_t n_min, bool correction, double gamma,
                   std::size_t hs_window) {
  rwc::RunConfig cfg;
  cfg.alpha = alpha;
  cfg.m = m;
  cfg.lambda = lambda;
  cfg.h = h;
  cfg.n_min = n_min;
  cfg.finite_sample_correction = correction;
  cfg.aci_gamma = gamma;
  cfg.calibrator = rwc::parse_method(method);
  cfg.validate();

  rwc::ReturnSeries rs;
  rs.returns = to_vector(returns_in);
  rs.dates = rwc::weekday_calendar(rwc::RegimeModel{}.start, rs.size());
  if (eval_start >= rs.size()) throw py::value_error("eval_start must lie inside the series");
  const auto losses = rwc::to_losses(rs);

  rwc::ForecastSeries fc;
  if (qhat_in) {
    fc.dates = losses.dates;
    fc.qhat = to_vector(*qhat_in);
    if (fc.qhat.size() != losses.size()) throw py::value_error("qhat must match returns in length");
    while (fc.valid_from < fc.size() && !std::isfinite(fc.qhat[fc.valid_from])) ++fc.valid_from;
  } else {
    fc = rwc::hs_forecast(losses, alpha, hs_window);
  }

  std::optional<rwc::RegimeEmbedding> emb;
  if (cfg.calibrator == rwc::Method::RWC) emb = rwc::build_embedding(rs, {0, stats_end.value_or(eval_start)});
  const auto b = rwc::run_calibrator(cfg.calibrator, losses, fc, emb ? &*emb : nullptr, cfg, {eval_start, rs.size()});

  const std::size_t n = b.size();
  std::vector<std::int64_t> index(n);
  std::vector<double> q(n), c(n), u(n), y(n), neff(n), tau(n), at(n);
  std::vector<int> exceed(n), fallback(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = b.records[i];
    index[i] = static_cast<std::int64_t>(r.index);
    q[i] = r.qhat;
    c[i] = r.chat;
    u[i] = r.bound;
    y[i] = r.loss;
    exceed[i] = r.exceed;
    neff[i] = r.n_eff;
    tau[i] = r.tau;
    fallback[i] = r.fallback;
    at[i] = r.alpha_t;
  }
  py::dict d;
  d["index"] = to_array(index);
  d["qhat"] = to_array(q);
  d["chat"] = to_array(c);
  d["bound"] = to_array(u);
  d["loss"] = to_array(y);
  d["exceed"] = to_array(exceed);
  d["n_eff"] = to_array(neff);
  d["tau"] = to_array(tau);
  d["fallback"] = to_array(fallback);
  d["alpha_t"] = to_array(at);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regime-weighted conformal VaR calibration";

  py::register_exception<rwc::Error>(m, "RwcError", PyExc_ValueError);

  m.def(
      "weighted_quantile",
      [](const Array& v, const Array& w, double gamma) { return rwc::weighted_quantile(to_vector(v), to_vector(w), gamma); },
      py::arg("values"), py::arg("weights"), py::arg("gamma"));
  m.def("inflated_level", &rwc::inflated_level, py::arg("alpha"), py::arg("total_weight"), py::arg("w_test") = 1.0);
  m.def(
      "conformal_threshold",
      [](const Array& s, const Array& w, double alpha, bool correction, double total, double w_test) {
        return rwc::conformal_threshold(to_vector(s), to_vector(w), alpha, correction, total, w_test);
      },
      py::arg("scores"), py::arg("weights"), py::arg("alpha"), py::arg("correction") = false,
      py::arg("total_weight") = 1.0, py::arg("w_test") = 1.0);
  m.def(
      "conformal_pvalue",
      [](const Array& s, const Array& w, double s_test, double w_test, double u) {
        return rwc::conformal_pvalue(to_vector(s), to_vector(w), s_test, w_test, u);
      },
      py::arg("scores"), py::arg("weights"), py::arg("s_test"), py::arg("w_test"), py::arg("u"));

  m.def(
      "time_only_weights",
      [](std::size_t t, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& idx, double lambda) {
        return weights_dict(rwc::time_only_weights(t, to_indices(idx), lambda));
      },
      py::arg("t"), py::arg("indices"), py::arg("lam"));
  m.def(
      "build_weights",
      [](std::size_t t, const py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>& idx, const Array& z,
         std::array<double, 2> z_t, double lambda, double h) {
        const auto indices = to_indices(idx);
        const auto points = to_points(z);
        if (points.size() != indices.size()) throw py::value_error("z must have one row per index");
        return weights_dict(rwc::build_weights(t, indices, points, z_t, lambda, h));
      },
      py::arg("t"), py::arg("indices"), py::arg("z"), py::arg("z_t"), py::arg("lam"), py::arg("h"));

  m.def("chi2_sf", &rwc::chi2_sf, py::arg("x"), py::arg("dof"));
  m.def(
      "kupiec_uc", [](std::size_t n, std::size_t x, double alpha) { return lr_dict(rwc::kupiec_uc(n, x, alpha)); },
      py::arg("n"), py::arg("x"), py::arg("alpha"));
  m.def(
      "christoffersen",
      [](const IntArray& ind, double alpha) {
        const auto r = rwc::christoffersen(to_ints(ind), alpha);
        py::dict d;
        d["uc"] = lr_dict(r.uc);
        d["ind"] = lr_dict(r.ind);
        d["cc"] = lr_dict(r.cc);
        return d;
      },
      py::arg("indicators"), py::arg("alpha"));
  m.def(
      "regime_stability",
      [](std::array<double, 5> rates, double target) {
        const auto s = rwc::regime_stability(rates, target);
        py::dict d;
        d["mae"] = s.mae;
        d["max_dev"] = s.max_dev;
        d["std"] = s.std;
        return d;
      },
      py::arg("rates_pct"), py::arg("target_pct"));
  m.def(
      "vol_quintiles", [](const Array& rv) { return to_array(rwc::assign_vol_quintiles(to_vector(rv))); },
      py::arg("rv"));

  m.def(
      "hs_forecast",
      [](const Array& losses, double alpha, std::size_t window) {
        rwc::LossSeries ls;
        ls.losses = to_vector(losses);
        ls.dates = rwc::weekday_calendar(rwc::RegimeModel{}.start, ls.size());
        return to_array(rwc::hs_forecast(ls, alpha, window).qhat);
      },
      py::arg("losses"), py::arg("alpha") = 0.01, py::arg("window") = rwc::kDefaultHsWindow);

  m.def("calibrate", &calibrate, py::arg("returns"), py::arg("method") = "rwc", py::arg("qhat") = py::none(),
        py::arg("eval_start"), py::arg("stats_end") = py::none(), py::arg("alpha") = 0.01, py::arg("m") = 252,
        py::arg("lam") = 0.0, py::arg("h") = rwc::kInfiniteBandwidth, py::arg("n_min") = 0,
        py::arg("correction") = false, py::arg("gamma") = 0.005, py::arg("hs_window") = rwc::kDefaultHsWindow,
        "Runs one calibrator over returns[eval_start:] and returns per-step arrays.");

  m.def(
      "simulate",
      [](std::vector<double> mu, std::vector<double> sigma, std::vector<std::vector<double>> transition,
         std::size_t length, std::uint64_t seed, std::size_t initial_state) {
        rwc::RegimeModel model;
        model.mu = std::move(mu);
        model.sigma = std::move(sigma);
        model.transition = std::move(transition);
        model.length = length;
        model.seed = seed;
        model.initial_state = initial_state;
        const auto sim = rwc::simulate(model);
        return py::make_tuple(to_array(sim.returns.returns), to_array(sim.states));
      },
      py::arg("mu"), py::arg("sigma"), py::arg("transition"), py::arg("length"), py::arg("seed"),
      py::arg("initial_state") = 0);
  m.def(
      "simulate_default",
      [](std::size_t length, std::uint64_t seed) {
        const auto sim = rwc::simulate(rwc::default_two_state_model(length, seed));
        return py::make_tuple(to_array(sim.returns.returns), to_array(sim.states));
      },
      py::arg("length"), py::arg("seed"));
  m.def(
      "simulate_iid_scores",
      [](std::size_t length, std::uint64_t seed, double mean, double stddev) {
        rwc::ScoreDistribution dist;
        dist.mean = mean;
        dist.stddev = stddev;
        return to_array(rwc::simulate_iid_scores(dist, length, seed));
      },
      py::arg("length"), py::arg("seed"), py::arg("mean") = 0.0, py::arg("stddev") = 1.0);
}
