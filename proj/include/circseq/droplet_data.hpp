#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "circseq/hcwe.hpp"

namespace circseq {

struct ContactAnglePoint {
  double time_s = 0.0;
  double angle_rad = 0.0;
};

/// Time-ordered contact-angle observations.
class ContactAngleSeries {
 public:
  ContactAngleSeries() = default;
  /// Throws ArgumentError unless times strictly increase, DomainError unless
  /// every angle is in [0, pi).
  explicit ContactAngleSeries(std::vector<ContactAnglePoint> points);

  std::span<const ContactAnglePoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  std::vector<double> times() const;
  std::vector<double> angles() const;
  AngleSample angle_sample() const { return AngleSample(angles()); }

 private:
  std::vector<ContactAnglePoint> points_;
};

/// Conditions of the saliva-droplet experiment behind the data. Metadata only.
struct ExperimentConditions {
  double relative_humidity = 50.0;     // percent
  double initial_volume = 10.0;        // nL
  double molality = 0.154;             // mol/kg
  double temperature = 30.0;           // deg C
  double surfactant_parameter = 10.0;  // dimensionless
  double initial_contact_angle = 50.0; // degrees

  /// Throws ParameterError on nonpositive fields or humidity above 100.
  void validate() const;
};

enum class RegressionDirection { TimeToAngle, AngleToTime };

struct PolynomialModel {
  /// c0 + c1 x + c2 x^2 + ...
  std::vector<double> coefficients;
  std::size_t degree = 0;
  double r_squared = 0.0;
  /// 1 - (1 - R^2)(n - 1)/(n - degree - 1); NaN when not fitted from data.
  double adjusted_r_squared = 0.0;
  RegressionDirection direction = RegressionDirection::TimeToAngle;

  double operator()(double x) const;
};

/// The 20 points digitized from the published curve for RH = 50%.
ContactAngleSeries table1_dataset();

/// Published cubic, time (s) -> angle (rad), R^2 = 0.9613.
PolynomialModel published_time_to_angle_model();

/// Published inverse cubic, angle (rad) -> time (s), R^2 = 0.98.
PolynomialModel published_angle_to_time_model();

/// Least squares through a QR decomposition of the centered and scaled
/// Vandermonde matrix; coefficients are reported in the raw x basis.
PolynomialModel fit_polynomial(std::span<const double> x,
                               std::span<const double> y, std::size_t degree,
                               RegressionDirection direction =
                                   RegressionDirection::TimeToAngle);

/// Throws OutOfValidityError when the prediction is not in (0, pi).
double predict_contact_angle(double t, const PolynomialModel& model);

struct TimeGrid {
  double start = 5.0;
  double end = 300.0;
  double step = 1.0;

  std::size_t size() const;
  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

ContactAngleSeries generate_pseudo_data(const PolynomialModel& model,
                                        const TimeGrid& grid = {});

/// Throws OutOfValidityError for a negative predicted time.
double drying_time(double contact_angle, const PolynomialModel& model);

/// Header `time_s,angle_rad`, 17 significant digits.
void write_series_csv(std::ostream& out, const ContactAngleSeries& series);
void write_series_csv(const std::string& path, const ContactAngleSeries& series);

/// Reads the format written above. The header row is optional.
ContactAngleSeries read_series_csv(std::istream& in);
ContactAngleSeries read_series_csv(const std::string& path);

}  // namespace circseq
