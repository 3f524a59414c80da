#include "fluct/increments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fluct/error.hpp"

namespace fluct {

IncrementLaw::IncrementLaw(Kind kind, std::string description)
    : kind_(std::move(kind)), description_(std::move(description)) {
  validate();
}

void IncrementLaw::validate() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    if (lat->support.empty()) throw ParameterError("lattice law needs a nonempty support");
    if (lat->support.size() != lat->probs.size())
      throw ParameterError("lattice support and probabilities differ in size");
    Rational total = 0;
    for (const auto& p : lat->probs) {
      if (sgn(p) < 0) throw ParameterError("negative lattice probability " + to_string(p));
      total += p;
    }
    if (total != 1) throw ParameterError("lattice probabilities sum to " + to_string(total));
    auto sorted = lat->support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParameterError("duplicate lattice support point");
  } else if (const auto* g = std::get_if<GaussianLaw>(&kind_)) {
    if (!(g->stddev > 0.0) || !std::isfinite(g->stddev) || !std::isfinite(g->mean))
      throw ParameterError("gaussian stddev must be positive and finite");
  } else {
    const auto& s = std::get<StableLaw>(kind_);
    if (!(s.tail_index > 0.0 && s.tail_index <= 2.0))
      throw ParameterError("tail index must lie in (0, 2]");
    if (!(s.scale > 0.0) || !std::isfinite(s.scale)) throw ParameterError("stable scale must be positive");
  }
}

IncrementLaw IncrementLaw::lattice(std::vector<Rational> support, std::vector<Rational> probs,
                                   std::string description) {
  for (auto& v : support) v.canonicalize();
  for (auto& p : probs) p.canonicalize();
  return IncrementLaw(LatticeLaw{std::move(support), std::move(probs)}, std::move(description));
}

IncrementLaw IncrementLaw::gaussian(double mean, double stddev, std::string description) {
  return IncrementLaw(GaussianLaw{mean, stddev}, std::move(description));
}

IncrementLaw IncrementLaw::symmetric_stable(double tail_index, double scale, std::string description) {
  return IncrementLaw(StableLaw{tail_index, scale}, std::move(description));
}

IncrementLaw IncrementLaw::fair_coin() {
  return lattice({Rational(-1), Rational(1)}, {Rational(1, 2), Rational(1, 2)}, "fair +-1");
}

IncrementLaw IncrementLaw::biased_coin(const Rational& p_up) {
  return lattice({Rational(-1), Rational(1)}, {1 - p_up, p_up}, "biased +-1 (p_up=" + to_string(p_up) + ")");
}

IncrementLaw IncrementLaw::uniform_three() {
  return lattice({Rational(-1), Rational(0), Rational(1)},
                 {Rational(1, 3), Rational(1, 3), Rational(1, 3)}, "uniform {-1,0,+1}");
}

IncrementLaw IncrementLaw::point_mass(const Rational& at) {
  return lattice({at}, {Rational(1)}, "point mass at " + to_string(at));
}

const LatticeLaw& IncrementLaw::as_lattice() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) return *lat;
  throw ParameterError("law '" + description_ + "' is not a lattice law");
}

bool IncrementLaw::is_symmetric() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    for (std::size_t i = 0; i < lat->support.size(); ++i) {
      Rational mirrored = -lat->support[i];
      auto it = std::find(lat->support.begin(), lat->support.end(), mirrored);
      if (it == lat->support.end()) return false;
      if (lat->probs[static_cast<std::size_t>(it - lat->support.begin())] != lat->probs[i]) return false;
    }
    return true;
  }
  if (const auto* g = std::get_if<GaussianLaw>(&kind_)) return g->mean == 0.0;
  return true;
}

bool IncrementLaw::has_negative_steps() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    for (std::size_t i = 0; i < lat->support.size(); ++i)
      if (sgn(lat->support[i]) < 0 && sgn(lat->probs[i]) > 0) return true;
    return false;
  }
  return true;
}

bool IncrementLaw::has_positive_steps() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    for (std::size_t i = 0; i < lat->support.size(); ++i)
      if (sgn(lat->support[i]) > 0 && sgn(lat->probs[i]) > 0) return true;
    return false;
  }
  return true;
}

double IncrementLaw::mean() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    Rational m = 0;
    for (std::size_t i = 0; i < lat->support.size(); ++i) m += lat->support[i] * lat->probs[i];
    return to_double(m);
  }
  if (const auto* g = std::get_if<GaussianLaw>(&kind_)) return g->mean;
  const auto& s = std::get<StableLaw>(kind_);
  return s.tail_index > 1.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
}

double IncrementLaw::variance() const {
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    Rational m = 0, m2 = 0;
    for (std::size_t i = 0; i < lat->support.size(); ++i) {
      m += lat->support[i] * lat->probs[i];
      m2 += lat->support[i] * lat->support[i] * lat->probs[i];
    }
    return to_double(m2 - m * m);
  }
  if (const auto* g = std::get_if<GaussianLaw>(&kind_)) return g->stddev * g->stddev;
  const auto& s = std::get<StableLaw>(kind_);
  if (s.tail_index == 2.0) return 2.0 * s.scale * s.scale;
  return std::numeric_limits<double>::infinity();
}

IncrementLaw IncrementLaw::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ParameterError("scale factor must be positive");
  if (is_lattice()) throw ParameterError("lattice laws need a rational scale factor");
  if (const auto* g = std::get_if<GaussianLaw>(&kind_))
    return gaussian(g->mean * factor, g->stddev * factor, description_);
  const auto& s = std::get<StableLaw>(kind_);
  return symmetric_stable(s.tail_index, s.scale * factor, description_);
}

IncrementLaw IncrementLaw::scaled(const Rational& factor) const {
  if (sgn(factor) <= 0) throw ParameterError("scale factor must be positive");
  if (!is_lattice()) return scaled(to_double(factor));
  auto lat = as_lattice();
  for (auto& v : lat.support) v *= factor;
  return lattice(std::move(lat.support), std::move(lat.probs), description_);
}

nlohmann::json IncrementLaw::to_json() const {
  nlohmann::json j;
  j["description"] = description_;
  if (const auto* lat = std::get_if<LatticeLaw>(&kind_)) {
    j["kind"] = "lattice";
    auto& sup = j["support"] = nlohmann::json::array();
    auto& pr = j["probs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < lat->support.size(); ++i) {
      sup.push_back(to_string(lat->support[i]));
      pr.push_back(to_string(lat->probs[i]));
    }
  } else if (const auto* g = std::get_if<GaussianLaw>(&kind_)) {
    j["kind"] = "gaussian";
    j["mean"] = g->mean;
    j["stddev"] = g->stddev;
  } else {
    const auto& s = std::get<StableLaw>(kind_);
    j["kind"] = "symmetric_stable";
    j["tail_index"] = s.tail_index;
    j["scale"] = s.scale;
    j["parametrization"] = "chambers-mallows-stuck, E exp(itY) = exp(-|scale t|^alpha)";
  }
  return j;
}

namespace {

Rational rational_field(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ParameterError("lattice entries must be fraction strings or integers");
}

}  // namespace

IncrementLaw IncrementLaw::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParameterError("increment law JSON needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const std::string desc = j.value("description", kind);
  if (kind == "lattice") {
    std::vector<Rational> support, probs;
    for (const auto& v : j.at("support")) support.push_back(rational_field(v));
    for (const auto& v : j.at("probs")) probs.push_back(rational_field(v));
    return lattice(std::move(support), std::move(probs), desc);
  }
  if (kind == "gaussian") return gaussian(j.value("mean", 0.0), j.value("stddev", 1.0), desc);
  if (kind == "symmetric_stable")
    return symmetric_stable(j.at("tail_index").get<double>(), j.value("scale", 1.0), desc);
  throw ParameterError("unknown increment law kind '" + kind + "'");
}

IntegerLattice IntegerLattice::from(const LatticeLaw& law) {
  IntegerLattice out;
  BigInt step_den = 1, prob_den = 1;
  for (const auto& v : law.support) step_den = lcm(step_den, v.get_den());
  for (const auto& p : law.probs) prob_den = lcm(prob_den, p.get_den());
  out.unit = Rational(1, step_den);
  out.unit.canonicalize();
  out.denominator = prob_den;
  for (std::size_t i = 0; i < law.support.size(); ++i) {
    BigInt s = law.support[i].get_num() * (step_den / law.support[i].get_den());
    if (!s.fits_slong_p()) throw ParameterError("lattice step too large");
    out.steps.push_back(s.get_si());
    out.weights.push_back(law.probs[i].get_num() * (prob_den / law.probs[i].get_den()));
  }
  return out;
}

long IntegerLattice::min_step() const {
  long m = steps.front();
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (weights[i] > 0) m = std::min(m, steps[i]);
  return m;
}

long IntegerLattice::max_step() const {
  long m = steps.front();
  for (std::size_t i = 0; i < steps.size(); ++i)
    if (weights[i] > 0) m = std::max(m, steps[i]);
  return m;
}

StepSampler::StepSampler(const IncrementLaw& law) {
  const auto& kind = law.kind();
  if (const auto* lat = std::get_if<LatticeLaw>(&kind)) {
    kind_ = Kind::lattice;
    double acc = 0.0;
    for (std::size_t i = 0; i < lat->support.size(); ++i) {
      values_.push_back(to_double(lat->support[i]));
      acc += to_double(lat->probs[i]);
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  } else if (const auto* g = std::get_if<GaussianLaw>(&kind)) {
    kind_ = Kind::gaussian;
    mean_ = g->mean;
    stddev_ = g->stddev;
  } else {
    const auto& s = std::get<StableLaw>(kind);
    kind_ = Kind::stable;
    alpha_ = s.tail_index;
    scale_ = s.scale;
  }
}

std::size_t StepSampler::draw_index(Rng& rng) const {
  double u = uniform_open(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

double StepSampler::operator()(Rng& rng) const {
  switch (kind_) {
    case Kind::lattice:
      return values_[draw_index(rng)];
    case Kind::gaussian: {
      std::normal_distribution<double> normal(mean_, stddev_);
      return normal(rng);
    }
    case Kind::stable:
      break;
  }
  constexpr double pi = std::numbers::pi;
  if (alpha_ == 2.0) {
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 * scale_);
    return normal(rng);
  }
  double v = pi * (uniform_open(rng) - 0.5);
  if (alpha_ == 1.0) return scale_ * std::tan(v);
  double w = -std::log(uniform_open(rng));
  double x = std::sin(alpha_ * v) / std::pow(std::cos(v), 1.0 / alpha_) *
             std::pow(std::cos((1.0 - alpha_) * v) / w, (1.0 - alpha_) / alpha_);
  return scale_ * x;
}

WalkPath::WalkPath(std::vector<double> values, std::optional<std::size_t> kill_index)
    : values_(std::move(values)), kill_index_(kill_index) {
  if (values_.empty() || values_[0] != 0.0) throw ParameterError("walk path must start at 0");
  if (kill_index_) {
    std::size_t j = *kill_index_;
    if (j >= values_.size()) throw ParameterError("kill index outside the window");
    double frozen = j == 0 ? 0.0 : values_[j - 1];
    for (std::size_t i = j; i < values_.size(); ++i)
      if (values_[i] != frozen) throw ParameterError("killed path is not frozen after its kill index");
  }
}

WalkPath WalkPath::killed(std::vector<double> raw, std::size_t kill) {
  if (raw.empty()) throw ParameterError("walk path must start at 0");
  if (kill >= raw.size()) throw ParameterError("kill index outside the window");
  double frozen = kill == 0 ? 0.0 : raw[kill - 1];
  for (std::size_t i = kill; i < raw.size(); ++i) raw[i] = frozen;
  return WalkPath(std::move(raw), kill);
}

WalkPath WalkPath::from_increments(std::span<const double> increments) {
  std::vector<double> v(increments.size() + 1, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) v[i + 1] = v[i] + increments[i];
  return WalkPath(std::move(v));
}

WalkPath WalkPath::negated() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] == 0.0 ? 0.0 : -values_[i];
  return WalkPath(std::move(v), kill_index_);
}

WalkPath WalkPath::scaled(double factor) const {
  std::vector<double> v(values_);
  for (auto& x : v) x *= factor;
  return WalkPath(std::move(v), kill_index_);
}

WalkPath WalkPath::prefix(std::size_t last_index) const {
  if (last_index >= values_.size()) throw DimensionError("prefix beyond the window");
  std::vector<double> v(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(last_index) + 1);
  std::optional<std::size_t> kill;
  if (kill_index_ && *kill_index_ <= last_index) kill = kill_index_;
  return WalkPath(std::move(v), kill);
}

WalkPath sample_walk(const StepSampler& sampler, std::size_t length, Rng& rng) {
  std::vector<double> v(length + 1, 0.0);
  for (std::size_t i = 1; i <= length; ++i) v[i] = v[i - 1] + sampler(rng);
  return WalkPath(std::move(v));
}

WalkPath sample_walk(const IncrementLaw& law, std::size_t length, std::uint64_t seed) {
  if (length < 1) throw ParameterError("walk length must be at least 1");
  StepSampler sampler(law);
  Rng rng = make_rng(seed);
  return sample_walk(sampler, length, rng);
}

WalkPath skeleton(const WalkPath& path, std::size_t stride) {
  if (stride == 0 || path.length() % stride != 0)
    throw DimensionError("stride " + std::to_string(stride) + " does not divide length " +
                         std::to_string(path.length()));
  std::vector<double> v(path.length() / stride + 1);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = path[stride * j];
  return WalkPath(std::move(v));
}

std::string to_csv(const WalkPath& path) {
  std::ostringstream out;
  out.precision(17);
  out << "index,value\n";
  for (std::size_t i = 0; i < path.size(); ++i) out << i << ',' << path[i] << '\n';
  return out.str();
}

}  // namespace fluct
