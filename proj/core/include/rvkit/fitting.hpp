#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace rvkit {

/// Kurt4: K(1 - 2/(B4/Δ + 2)).  Mom6: M6 L^2 / ((L+4)(L+2)) with L = B6/Δ.
/// Both tend to their scale parameter as Δ → 0.
enum class CurveModel { Kurt4, Mom6 };

std::string_view to_string(CurveModel model);
CurveModel parse_curve_model(std::string_view text);

struct CurvePoint {
  double delta_minutes = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

/// (K, B4) or (M6, B6).
struct ModelParams {
  double scale = 0.0;
  double decay = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

double kurt_model(double delta, double K, double B4);
double m6_model(double delta, double M6, double B6);
double evaluate(CurveModel model, double delta, const ModelParams& p);
/// d/d(scale), d/d(decay).
std::array<double, 2> model_gradient(CurveModel model, double delta, const ModelParams& p);

struct FitOptions {
  int max_iterations = 500;
  double rss_rel_tol = 1e-12;
  double gradient_tol = 1e-10;
};

struct FitResult {
  CurveModel model = CurveModel::Kurt4;
  ModelParams params;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // ∞-norm in the (scale, log decay) parameterization
  /// Gauss-Newton approximation, NaN when fewer than three points.
  ModelParams standard_errors;
};

/// Weighted least squares by Levenberg-Marquardt over (scale, log decay).
/// Default start: scale = y at the smallest Δ, decay = largest Δ.
/// Throws InsufficientData for fewer than 3 points and SingularJacobian
/// when fewer than two distinct Δ are present. Non-convergence is reported
/// through `converged`, never thrown.
FitResult fit_curve(std::span<const CurvePoint> points, CurveModel model,
                    std::optional<ModelParams> init = std::nullopt, const FitOptions& options = {});

double residual_sum_of_squares(std::span<const CurvePoint> points, CurveModel model,
                               const ModelParams& p);

nlohmann::json to_json(const FitResult& fit);
FitResult fit_result_from_json(const nlohmann::json& j);

}  // namespace rvkit
