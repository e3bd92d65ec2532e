#include "shearlab/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace shearlab {

int StageSchedule::stage_at(double t) const {
  if (t < 0.0) return -1;
  for (const Stage& st : stages)
    if (t >= st.start && t < st.end()) return st.index;
  return -1;
}

int StageSchedule::first_active() const {
  for (const Stage& st : stages)
    if (st.active) return st.index;
  return -1;
}

int activation_index(double alpha) {
  if (alpha <= 0.0) return 1;
  return static_cast<int>(std::floor(1.0 / alpha)) + 1;
}

namespace {

// ceil((1+alpha) j) with a snap to nearby integers so exactly representable
// products (alpha = 0.5, 1, ...) do not round up from FP dust.
int freq_exponent(double alpha, int j) {
  double e = (1.0 + alpha) * static_cast<double>(j);
  double r = std::nearbyint(e);
  if (std::fabs(e - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(e));
}

double eps_prefactor(double alpha, double a0) {
  if (alpha <= 0.0) return a0 * 1e-30;  // boundary test mode; formula underflows
  return a0 * std::exp(-30.0 * (1.0 + 1.0 / (std::exp2(alpha) - 1.0)));
}

}  // namespace

StageSchedule build_universal(double alpha, int j_max, const BuildOptions& opts) {
  bool in_open = alpha > 0.0 && alpha < 1.0;
  bool boundary_ok = opts.allow_boundary_alpha && alpha >= 0.0 && alpha <= 1.0;
  if (!in_open && !boundary_ok)
    throw ConfigError("universal program requires alpha in (0,1)");
  if (j_max < 0) throw ConfigError("j_max must be nonnegative");
  if (!(opts.a0 > 0.0 && opts.a0 <= 1.0))
    throw ConfigError("a0 must lie in (0,1]");
  if (freq_exponent(alpha, j_max) > 62)
    throw ConfigError("stage frequency exceeds 2^62; reduce j_max");

  StageSchedule s;
  s.alpha = alpha;
  s.a0 = opts.a0;
  s.j_active_min = activation_index(alpha);
  s.j_max = j_max;
  double pref = eps_prefactor(alpha, opts.a0);
  for (int j = 0; j <= j_max; ++j) {
    Stage st;
    st.index = j;
    st.duration = j == 0 ? 0.0 : std::ldexp(1.0, -j);
    st.start = j == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -(j - 1));
    st.freq = std::int64_t{1} << freq_exponent(alpha, j);
    st.eps = pref * std::ldexp(1.0, -2 * j);
    if (!(st.eps > 0.0 && st.eps < half_pi))
      throw ConfigError("stage smoothing width left (0, pi/2)");
    st.horizontal = (j % 2 == 0);
    st.sign = 0;
    st.active = j >= s.j_active_min;
    s.stages.push_back(st);
  }
  return s;
}

StageSchedule make_custom_schedule(std::vector<Stage> stages, int first_index) {
  StageSchedule s;
  s.alpha = 0.0;
  s.a0 = 1.0;
  s.j_active_min = first_index;
  s.j_max = first_index + static_cast<int>(stages.size()) - 1;
  double t = 0.0;
  int j = first_index;
  for (Stage st : stages) {
    st.index = j;
    st.start = t;
    st.active = st.duration > 0.0;
    if (!(st.eps > 0.0 && st.eps < half_pi))
      throw ConfigError("stage smoothing width must lie in (0, pi/2)");
    if (st.freq < 1) throw ConfigError("stage frequency must be positive");
    t += st.duration;
    ++j;
    s.stages.push_back(st);
  }
  return s;
}

std::pair<double, double> velocity_at(const StageSchedule& s, double t,
                                      double x, double y) {
  if (t < 0.0 || t >= 1.0) throw ConfigError("velocity query outside [0,1)");
  int j = s.stage_at(t);
  if (j < 0) return {0.0, 0.0};
  const Stage& st = s.stages[static_cast<std::size_t>(j - s.stages.front().index)];
  if (!st.active) return {0.0, 0.0};
  SawtoothProfile prof = st.profile();
  double nf = static_cast<double>(st.freq);
  if (st.horizontal) return {st.sigma() * prof.value(nf * y), 0.0};
  return {0.0, st.sigma() * prof.value(nf * x)};
}

HolderBudget holder_budget(const StageSchedule& s, double alpha_prime) {
  if (!(alpha_prime > 0.0 && alpha_prime <= 1.0))
    throw ConfigError("alpha' must lie in (0,1]");
  HolderBudget b;
  b.exponent = (1.0 + s.alpha) * alpha_prime - 1.0;
  b.tail_ratio = std::exp2(b.exponent);
  b.finite = b.tail_ratio < 1.0;
  b.partial_sum = pairwise_sum_fn(s.stages.size(), [&](std::size_t i) {
    const Stage& st = s.stages[i];
    if (!st.active) return 0.0;
    return st.duration * std::pow(static_cast<double>(st.freq), alpha_prime);
  });
  if (b.finite) {
    // t_j N_j^{a'} <= 2^{a'} r^j for j > j_max, r = tail_ratio
    double r = b.tail_ratio;
    b.tail_bound = std::exp2(alpha_prime) *
                   std::pow(r, static_cast<double>(s.j_max + 1)) / (1.0 - r);
  } else {
    b.tail_bound = std::numeric_limits<double>::infinity();
  }
  return b;
}

namespace {

std::string hexd(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexd(const std::string& tok) {
  return std::strtod(tok.c_str(), nullptr);
}

}  // namespace

void save_schedule(const StageSchedule& s, std::ostream& out) {
  out << "shearlab schedule v1\n";
  out << "alpha " << hexd(s.alpha) << "\n";
  out << "a0 " << hexd(s.a0) << "\n";
  out << "j_active_min " << s.j_active_min << "\n";
  out << "j_max " << s.j_max << "\n";
  out << "stages " << s.stages.size() << "\n";
  for (const Stage& st : s.stages) {
    out << "stage " << st.index << " " << hexd(st.duration) << " "
        << hexd(st.start) << " " << st.freq << " " << hexd(st.eps) << " "
        << (st.horizontal ? "h" : "v") << " " << st.sign << " "
        << (st.active ? 1 : 0) << "\n";
  }
}

void save_schedule_file(const StageSchedule& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open schedule file for writing: " + path);
  save_schedule(s, f);
}

StageSchedule load_schedule(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "shearlab schedule v1")
    throw ConfigError("schedule file: bad header");
  StageSchedule s;
  std::size_t nstages = 0;
  auto next = [&](const char* key) {
    if (!std::getline(in, line)) throw ConfigError("schedule file: truncated");
    std::istringstream is(line);
    std::string k;
    is >> k;
    if (k != key) throw ConfigError(std::string("schedule file: expected ") + key);
    std::string rest;
    is >> rest;
    return rest;
  };
  s.alpha = parse_hexd(next("alpha"));
  s.a0 = parse_hexd(next("a0"));
  s.j_active_min = std::stoi(next("j_active_min"));
  s.j_max = std::stoi(next("j_max"));
  nstages = static_cast<std::size_t>(std::stoul(next("stages")));
  for (std::size_t i = 0; i < nstages; ++i) {
    if (!std::getline(in, line)) throw ConfigError("schedule file: truncated");
    std::istringstream is(line);
    std::string key, dur, start, eps, dir;
    Stage st;
    int active = 0;
    is >> key >> st.index >> dur >> start >> st.freq >> eps >> dir >> st.sign >>
        active;
    if (key != "stage" || is.fail())
      throw ConfigError("schedule file: bad stage record");
    st.duration = parse_hexd(dur);
    st.start = parse_hexd(start);
    st.eps = parse_hexd(eps);
    st.horizontal = dir == "h";
    st.active = active != 0;
    s.stages.push_back(st);
  }
  return s;
}

StageSchedule load_schedule_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open schedule file: " + path);
  return load_schedule(f);
}

}  // namespace shearlab
