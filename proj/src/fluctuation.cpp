#include "fluct/fluctuation.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "fluct/error.hpp"

namespace fluct {

std::vector<double> LocalTimeCurve::normalized(double norming) const {
  if (!(norming > 0.0)) throw ParameterError("norming constant must be positive");
  std::vector<double> out(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(counts[i]) / norming;
  return out;
}

std::string LocalTimeCurve::to_csv() const {
  std::ostringstream out;
  out << "index,value\n";
  for (std::size_t i = 0; i < counts.size(); ++i) out << i << ',' << counts[i] << '\n';
  return out.str();
}

nlohmann::json LadderSequence::to_json() const {
  return {{"epochs", epochs},
          {"heights", heights},
          {"killed", killed},
          {"direction", direction == Direction::ascending ? "ascending" : "descending"},
          {"variant", variant == LadderVariant::strict ? "strict" : "weak"}};
}

std::string LadderSequence::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "k,epoch,height\n";
  for (std::size_t k = 0; k < epochs.size(); ++k) out << k << ',' << epochs[k] << ',' << heights[k] << '\n';
  return out.str();
}

std::vector<double> running_max(const WalkPath& path) {
  std::vector<double> m(path.size());
  double cur = path[0];
  for (std::size_t i = 0; i < path.size(); ++i) m[i] = cur = std::max(cur, path[i]);
  return m;
}

std::vector<double> running_min(const WalkPath& path) {
  std::vector<double> m(path.size());
  double cur = path[0];
  for (std::size_t i = 0; i < path.size(); ++i) m[i] = cur = std::min(cur, path[i]);
  return m;
}

LocalTimeCurve local_time_verbatim(const WalkPath& path) {
  LocalTimeCurve out{std::vector<long>(path.size(), 0), LocalTimeVariant::verbatim};
  double max = path[0];
  for (std::size_t j = 1; j < path.size(); ++j) {
    bool hit = path[j - 1] < path[j] && path[j] >= max;
    max = std::max(max, path[j]);
    out.counts[j] = out.counts[j - 1] + (hit ? 1 : 0);
  }
  return out;
}

LocalTimeCurve local_time_strict(const WalkPath& path) {
  LocalTimeCurve out{std::vector<long>(path.size(), 0), LocalTimeVariant::strict};
  double max = path[0];
  for (std::size_t j = 1; j < path.size(); ++j) {
    bool hit = path[j] > max;
    max = std::max(max, path[j]);
    out.counts[j] = out.counts[j - 1] + (hit ? 1 : 0);
  }
  return out;
}

LadderSequence ladder_sequence(const WalkPath& path, Direction direction, LadderVariant variant) {
  LadderSequence seq;
  seq.direction = direction;
  seq.variant = variant;
  seq.epochs.push_back(0);
  seq.heights.push_back(0.0);
  const double sign = direction == Direction::ascending ? 1.0 : -1.0;
  const std::size_t end = path.kill_index().value_or(path.size());
  double level = 0.0;
  for (std::size_t j = 1; j < end; ++j) {
    double v = sign * path[j];
    bool epoch = variant == LadderVariant::strict ? v > level : v >= level;
    if (epoch) {
      seq.epochs.push_back(j);
      seq.heights.push_back(v == 0.0 ? 0.0 : v);
      level = v;
    }
  }
  seq.killed = seq.epochs.back() < path.length();
  return seq;
}

std::size_t last_max_index(const WalkPath& path, std::size_t k) {
  if (k > path.length()) throw DimensionError("index beyond the window");
  std::size_t last = 0;
  double max = path[0];
  for (std::size_t j = 0; j <= k; ++j) {
    max = std::max(max, path[j]);
    if (path[j] == max) last = j;
  }
  return last;
}

std::size_t last_min_index(const WalkPath& path, std::size_t k) {
  if (k > path.length()) throw DimensionError("index beyond the window");
  std::size_t last = 0;
  double min = path[0];
  for (std::size_t j = 0; j <= k; ++j) {
    min = std::min(min, path[j]);
    if (path[j] == min) last = j;
  }
  return last;
}

nlohmann::json RecordsRatio::to_json() const {
  nlohmann::json j{{"lambda", up}, {"lambda_hat", down}};
  switch (flag) {
    case Flag::finite:
      j["ratio"] = ratio;
      j["flag"] = "finite";
      break;
    case Flag::infinite:
      j["ratio"] = nullptr;
      j["flag"] = "infinite";
      break;
    case Flag::undefined:
      j["ratio"] = nullptr;
      j["flag"] = "undefined";
      break;
  }
  return j;
}

RecordsRatio records_ratio(const WalkPath& path) {
  RecordsRatio r;
  r.up = local_time_verbatim(path).counts.back();
  r.down = local_time_verbatim(path.negated()).counts.back();
  if (r.down > 0) {
    r.flag = RecordsRatio::Flag::finite;
    r.ratio = static_cast<double>(r.up) / static_cast<double>(r.down);
  } else if (r.up > 0) {
    r.flag = RecordsRatio::Flag::infinite;
    r.ratio = std::numeric_limits<double>::infinity();
  } else {
    r.flag = RecordsRatio::Flag::undefined;
    r.ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace fluct
