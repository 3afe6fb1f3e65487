#pragma once

// Independent straight-loop recomputations used as test references. Nothing
// here calls into the library's numerical code.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct QpResult {
  std::vector<double> beta;  // alpha - alpha*
  double bias = 0.0;
  double objective = 0.0;  // maximisation form
  std::size_t iterations = 0;
};

// Dense accelerated projected-gradient solve of the epsilon-SVR dual over
// (alpha, alpha*) in [0,C]^{2l} with sum(alpha - alpha*) = 0.
QpResult svr_dual_qp(const Matrix& K, const std::vector<double>& y, double C, double epsilon,
                     std::size_t max_iterations = 2000000);

double svr_dual_value(const Matrix& K, const std::vector<double>& y, const std::vector<double>& beta,
                      double epsilon);

Matrix rbf_matrix(const Matrix& X, double gamma);
double rbf(const std::vector<double>& a, const std::vector<double>& b, double gamma);

// ---- raw-log recomputation ------------------------------------------------

struct RawSample {
  std::int64_t t;
  double x, y, z;
};

struct RawEvent {
  std::int64_t t;
  std::string channel;    // "call" | "message"
  std::string direction;  // "incoming" | "outgoing" | "missed"
  std::string contact;
  std::int64_t duration;
};

// Rows of one participant from the CSV text of the documented schemas.
std::vector<RawSample> read_accel_csv(const std::string& text, const std::string& participant);
std::vector<RawEvent> read_comm_csv(const std::string& text, const std::string& participant);

// (day index, hour) -> MAD of the hour's resultants, hour kept only with
// at least `min_samples` samples. Day index is floor(t / 86400).
std::map<std::pair<std::int64_t, int>, double> hourly_mad(const std::vector<RawSample>& samples,
                                                          std::size_t min_samples);

// Every feature name -> value for one participant; absent features are
// omitted. Days range over [first_day, last_day]; night hours belong to
// their own calendar date; segments are [0,9), [9,18), [18,24).
std::map<std::string, double> features(const std::vector<RawSample>& samples,
                                       std::vector<RawEvent> events, std::int64_t first_day,
                                       std::int64_t last_day, std::size_t min_samples = 25,
                                       std::int64_t response_window = 3600);

// ---- statistics -----------------------------------------------------------

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oracle
