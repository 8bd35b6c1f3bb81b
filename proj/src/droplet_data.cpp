#include "circseq/droplet_data.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "circseq/csv.hpp"
#include "circseq/errors.hpp"

namespace circseq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

void require_direction(const PolynomialModel& model, RegressionDirection want,
                       const char* where) {
  if (model.direction != want) {
    throw ArgumentError(std::string(where) +
                        ": model has the wrong regression direction");
  }
}

}  // namespace

ContactAngleSeries::ContactAngleSeries(std::vector<ContactAnglePoint> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.time_s) || p.time_s < 0.0) {
      throw ArgumentError("ContactAngleSeries: time at row " +
                          std::to_string(i) + " must be finite and >= 0");
    }
    if (i > 0 && !(p.time_s > points_[i - 1].time_s)) {
      throw ArgumentError("ContactAngleSeries: times must strictly increase (row " +
                          std::to_string(i) + ")");
    }
    if (!(p.angle_rad >= 0.0 && p.angle_rad < kPi)) {
      throw DomainError("ContactAngleSeries: angle at row " + std::to_string(i) +
                        " is outside [0, pi)");
    }
  }
}

std::vector<double> ContactAngleSeries::times() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.time_s);
  return out;
}

std::vector<double> ContactAngleSeries::angles() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.angle_rad);
  return out;
}

void ExperimentConditions::validate() const {
  const double fields[] = {relative_humidity, initial_volume, molality,
                           temperature, surfactant_parameter,
                           initial_contact_angle};
  for (double f : fields) {
    if (!(f > 0.0)) throw ParameterError("ExperimentConditions: fields must be > 0");
  }
  if (relative_humidity > 100.0) {
    throw ParameterError("ExperimentConditions: relative humidity above 100%");
  }
}

double PolynomialModel::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

ContactAngleSeries table1_dataset() {
  return ContactAngleSeries({
      {10.0, 0.811},   {25.0, 0.794},   {55.0, 0.689},   {58.75, 0.654},
      {66.25, 0.593},  {77.25, 0.471},  {83.15, 0.436},  {88.75, 0.379},
      {100.0, 0.261},  {118.75, 0.218}, {137.5, 0.157},  {175.0, 0.109},
      {212.5, 0.052},  {250.0, 0.035},  {287.5, 0.034},  {325.0, 0.031},
      {381.25, 0.028}, {437.5, 0.026},  {493.75, 0.023}, {550.0, 0.020},
  });
}

PolynomialModel published_time_to_angle_model() {
  return {{0.985, -8.45e-3, 2.34e-5, -2.05e-8},
          3,
          0.9613,
          kNaN,
          RegressionDirection::TimeToAngle};
}

PolynomialModel published_angle_to_time_model() {
  return {{266.96, -872.293, 1329.892, -763.05},
          3,
          0.98,
          kNaN,
          RegressionDirection::AngleToTime};
}

PolynomialModel fit_polynomial(std::span<const double> x,
                               std::span<const double> y, std::size_t degree,
                               RegressionDirection direction) {
  if (x.size() != y.size()) {
    throw ArgumentError("fit_polynomial: x and y lengths differ");
  }
  const std::size_t n = x.size();
  if (n < degree + 2) {
    throw ArgumentError("fit_polynomial: need at least degree + 2 points");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ArgumentError("fit_polynomial: non-finite input");
    }
  }
  const double center = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v - center));
  if (scale == 0.0) throw SingularFitError("fit_polynomial: all x values are identical");

  const auto cols = static_cast<Eigen::Index>(degree + 1);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), cols);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (x[i] - center) / scale;
    double power = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      design(static_cast<Eigen::Index>(i), j) = power;
      power *= z;
    }
    rhs(static_cast<Eigen::Index>(i)) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols) {
    throw SingularFitError("fit_polynomial: design matrix is rank deficient (rank " +
                           std::to_string(qr.rank()) + " < " +
                           std::to_string(cols) + ")");
  }
  const Eigen::VectorXd scaled = qr.solve(rhs);

  const Eigen::VectorXd fitted = design * scaled;
  const double y_mean = rhs.mean();
  const double ss_res = (rhs - fitted).squaredNorm();
  const double ss_tot = (rhs.array() - y_mean).square().sum();

  // Expand sum_j b_j ((x - c)/s)^j into powers of x.
  std::vector<double> raw(degree + 1, 0.0);
  for (std::size_t j = 0; j <= degree; ++j) {
    const double bj = scaled(static_cast<Eigen::Index>(j)) / std::pow(scale, static_cast<double>(j));
    for (std::size_t k = 0; k <= j; ++k) {
      raw[k] += bj * binomial(j, k) * std::pow(-center, static_cast<double>(j - k));
    }
  }

  PolynomialModel model;
  model.coefficients = std::move(raw);
  model.degree = degree;
  model.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0)
                                 : (ss_res == 0.0 ? 1.0 : 0.0);
  const double dof = static_cast<double>(n) - static_cast<double>(degree) - 1.0;
  model.adjusted_r_squared =
      1.0 - (1.0 - model.r_squared) * (static_cast<double>(n) - 1.0) / dof;
  model.direction = direction;
  return model;
}

double predict_contact_angle(double t, const PolynomialModel& model) {
  require_direction(model, RegressionDirection::TimeToAngle,
                    "predict_contact_angle");
  if (!(t >= 0.0)) throw ArgumentError("predict_contact_angle: time must be >= 0");
  const double angle = model(t);
  if (!(angle > 0.0 && angle < kPi)) {
    throw OutOfValidityError("predict_contact_angle: predicted angle " +
                             std::to_string(angle) + " at t = " +
                             std::to_string(t) + " s is outside (0, pi)");
  }
  return angle;
}

std::size_t TimeGrid::size() const {
  if (!(start < end) || !(step > 0.0) || !std::isfinite(end)) {
    throw ArgumentError("TimeGrid: need start < end and step > 0");
  }
  return static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
}

ContactAngleSeries generate_pseudo_data(const PolynomialModel& model,
                                        const TimeGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<ContactAnglePoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.at(i);
    points.push_back({t, predict_contact_angle(t, model)});
  }
  return ContactAngleSeries(std::move(points));
}

double drying_time(double contact_angle, const PolynomialModel& model) {
  require_direction(model, RegressionDirection::AngleToTime, "drying_time");
  if (!(contact_angle >= 0.0)) {
    throw ArgumentError("drying_time: contact angle must be >= 0");
  }
  const double t = model(contact_angle);
  if (t < 0.0) {
    throw OutOfValidityError("drying_time: predicted time " + std::to_string(t) +
                             " s at CA = " + std::to_string(contact_angle) +
                             " rad is negative");
  }
  return t;
}

void write_series_csv(std::ostream& out, const ContactAngleSeries& series) {
  out << "time_s,angle_rad\n";
  for (const auto& p : series.points()) {
    out << csv::format(p.time_s) << ',' << csv::format(p.angle_rad) << '\n';
  }
}

void write_series_csv(const std::string& path, const ContactAngleSeries& series) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
  write_series_csv(out, series);
  if (!out) throw ArgumentError("failed writing '" + path + "'");
}

ContactAngleSeries read_series_csv(std::istream& in) {
  std::vector<ContactAnglePoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = csv::split(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 2) {
      throw ArgumentError("series CSV line " + std::to_string(line_no) +
                          ": expected 2 fields, got " +
                          std::to_string(fields.size()));
    }
    if (points.empty() && fields[0] == "time_s" && fields[1] == "angle_rad") continue;
    const std::string where = "line " + std::to_string(line_no);
    points.push_back({csv::parse_double(fields[0], where),
                      csv::parse_double(fields[1], where)});
  }
  return ContactAngleSeries(std::move(points));
}

ContactAngleSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "' for reading");
  return read_series_csv(in);
}

}  // namespace circseq
