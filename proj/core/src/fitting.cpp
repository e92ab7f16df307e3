#include "rvkit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rvkit/error.hpp"

namespace rvkit {
namespace {

struct Names {
  const char* scale;
  const char* decay;
};

Names names_of(CurveModel model) {
  return model == CurveModel::Kurt4 ? Names{"K", "B4"} : Names{"M6", "B6"};
}

struct Linearization {
  std::vector<double> residuals;       // sqrt(w) (y - f)
  std::vector<std::array<double, 2>> jac;  // sqrt(w) df/d(scale, log decay)
  double rss = 0.0;
};

Linearization linearize(std::span<const CurvePoint> points, CurveModel model,
                        const ModelParams& p) {
  Linearization lin;
  lin.residuals.reserve(points.size());
  lin.jac.reserve(points.size());
  for (const auto& pt : points) {
    const double sw = std::sqrt(pt.weight);
    const double r = sw * (pt.y - evaluate(model, pt.delta_minutes, p));
    const auto g = model_gradient(model, pt.delta_minutes, p);
    lin.residuals.push_back(r);
    lin.jac.push_back({sw * g[0], sw * g[1] * p.decay});
    lin.rss += r * r;
  }
  return lin;
}

}  // namespace

std::string_view to_string(CurveModel model) {
  return model == CurveModel::Kurt4 ? "Kurt4" : "Mom6";
}

CurveModel parse_curve_model(std::string_view text) {
  if (text == "Kurt4") return CurveModel::Kurt4;
  if (text == "Mom6") return CurveModel::Mom6;
  throw Error(ErrorKind::ConfigInvalid, fmt::format("unknown curve model '{}'", text));
}

double kurt_model(double delta, double K, double B4) {
  // K (1 - 2/(B4/Δ + 2)) rewritten as K B4 / (B4 + 2Δ).
  return K * B4 / (B4 + 2 * delta);
}

double m6_model(double delta, double M6, double B6) {
  const double L = B6 / delta;
  return M6 * L * L / ((L + 4) * (L + 2));
}

double evaluate(CurveModel model, double delta, const ModelParams& p) {
  return model == CurveModel::Kurt4 ? kurt_model(delta, p.scale, p.decay)
                                    : m6_model(delta, p.scale, p.decay);
}

std::array<double, 2> model_gradient(CurveModel model, double delta, const ModelParams& p) {
  const double B = p.decay;
  if (model == CurveModel::Kurt4) {
    const double den = B + 2 * delta;
    return {B / den, p.scale * 2 * delta / (den * den)};
  }
  const double a = B + 4 * delta;
  const double b = B + 2 * delta;
  const double shape = B * B / (a * b);
  return {shape, p.scale * shape * (2 / B - 1 / a - 1 / b)};
}

double residual_sum_of_squares(std::span<const CurvePoint> points, CurveModel model,
                               const ModelParams& p) {
  double rss = 0.0;
  for (const auto& pt : points) {
    const double r = pt.y - evaluate(model, pt.delta_minutes, p);
    rss += pt.weight * r * r;
  }
  return rss;
}

FitResult fit_curve(std::span<const CurvePoint> points, CurveModel model,
                    std::optional<ModelParams> init, const FitOptions& options) {
  if (points.size() < 3) {
    throw Error(ErrorKind::InsufficientData,
                fmt::format("{} curve points, need at least 3", points.size()));
  }
  std::set<double> distinct;
  for (const auto& pt : points) {
    if (!(pt.delta_minutes > 0.0) || !std::isfinite(pt.y) || !(pt.weight > 0.0)) {
      throw Error(ErrorKind::InsufficientData,
                  fmt::format("invalid curve point (delta={}, y={}, weight={})", pt.delta_minutes,
                              pt.y, pt.weight));
    }
    distinct.insert(pt.delta_minutes);
  }
  if (distinct.size() < 2) {
    throw Error(ErrorKind::SingularJacobian, "all curve points share one delta");
  }

  ModelParams p;
  if (init) {
    p = *init;
  } else {
    const auto smallest = std::min_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
      return a.delta_minutes < b.delta_minutes;
    });
    p = {smallest->y, *distinct.rbegin()};
  }
  if (!(p.decay > 0.0)) {
    throw Error(ErrorKind::ConfigInvalid, "initial decay parameter must be positive");
  }

  FitResult fit;
  fit.model = model;
  auto lin = linearize(points, model, p);
  double lambda = 1e-3;

  auto gradient_norm = [](const Linearization& l) {
    double g0 = 0, g1 = 0;
    for (std::size_t i = 0; i < l.residuals.size(); ++i) {
      g0 += l.jac[i][0] * l.residuals[i];
      g1 += l.jac[i][1] * l.residuals[i];
    }
    return std::max(std::abs(g0), std::abs(g1));
  };

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (lin.rss == 0.0 || gradient_norm(lin) < options.gradient_tol) {
      fit.converged = true;
      break;
    }
    double h00 = 0, h01 = 0, h11 = 0, g0 = 0, g1 = 0;
    for (std::size_t i = 0; i < lin.residuals.size(); ++i) {
      const auto& j = lin.jac[i];
      h00 += j[0] * j[0];
      h01 += j[0] * j[1];
      h11 += j[1] * j[1];
      g0 += j[0] * lin.residuals[i];
      g1 += j[1] * lin.residuals[i];
    }

    bool accepted = false;
    double rel_change = 0.0;
    while (lambda < 1e20) {
      const double a00 = h00 * (1 + lambda);
      const double a11 = h11 * (1 + lambda);
      const double det = a00 * a11 - h01 * h01;
      if (det > 0.0 && std::isfinite(det)) {
        const double d0 = (a11 * g0 - h01 * g1) / det;
        const double d1 = (a00 * g1 - h01 * g0) / det;
        const ModelParams trial{p.scale + d0, p.decay * std::exp(d1)};
        if (std::isfinite(trial.scale) && trial.decay > 0.0 && std::isfinite(trial.decay)) {
          auto next = linearize(points, model, trial);
          if (next.rss < lin.rss) {
            rel_change = (lin.rss - next.rss) / lin.rss;
            p = trial;
            lin = std::move(next);
            lambda = std::max(lambda / 10, 1e-15);
            accepted = true;
            break;
          }
        }
      }
      lambda *= 10;
    }
    if (!accepted) {
      // No descent step exists at this precision.
      fit.converged = gradient_norm(lin) < options.gradient_tol;
      break;
    }
    if (rel_change < options.rss_rel_tol) {
      ++it;
      fit.converged = true;
      break;
    }
  }

  fit.params = p;
  fit.rss = lin.rss;
  fit.iterations = it;
  fit.gradient_norm = gradient_norm(lin);

  // Covariance s^2 (J^T W J)^{-1} in the natural (scale, decay) parameters.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  fit.standard_errors = {nan, nan};
  if (points.size() > 2) {
    double h00 = 0, h01 = 0, h11 = 0;
    for (const auto& pt : points) {
      const auto g = model_gradient(model, pt.delta_minutes, p);
      h00 += pt.weight * g[0] * g[0];
      h01 += pt.weight * g[0] * g[1];
      h11 += pt.weight * g[1] * g[1];
    }
    const double det = h00 * h11 - h01 * h01;
    if (det > 0.0) {
      const double s2 = lin.rss / static_cast<double>(points.size() - 2);
      fit.standard_errors = {std::sqrt(s2 * h11 / det), std::sqrt(s2 * h00 / det)};
    }
  }
  return fit;
}

nlohmann::json to_json(const FitResult& fit) {
  const auto n = names_of(fit.model);
  nlohmann::json j;
  j["model"] = std::string(to_string(fit.model));
  j["params"] = {{n.scale, fit.params.scale}, {n.decay, fit.params.decay}};
  j["rss"] = fit.rss;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["gradient_norm"] = fit.gradient_norm;
  j["se"] = {{n.scale, fit.standard_errors.scale}, {n.decay, fit.standard_errors.decay}};
  return j;
}

FitResult fit_result_from_json(const nlohmann::json& j) {
  auto number = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  try {
    FitResult fit;
    fit.model = parse_curve_model(j.at("model").get<std::string>());
    const auto n = names_of(fit.model);
    fit.params = {number(j.at("params").at(n.scale)), number(j.at("params").at(n.decay))};
    fit.rss = number(j.at("rss"));
    fit.converged = j.at("converged").get<bool>();
    fit.iterations = j.at("iterations").get<int>();
    fit.gradient_norm = number(j.value("gradient_norm", nlohmann::json(0.0)));
    fit.standard_errors = {number(j.at("se").at(n.scale)), number(j.at("se").at(n.decay))};
    return fit;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::MalformedRow, e.what(), "fit json");
  }
}

}  // namespace rvkit
