#include "ldhp/mechanics.hpp"

#include <algorithm>
#include <cmath>

namespace ldhp {

const char* contact_mode_name(ContactMode m) {
  switch (m) {
    case ContactMode::Sticking: return "sticking";
    case ContactMode::Rolling: return "rolling";
    case ContactMode::SlidingPos: return "sliding+";
    case ContactMode::SlidingNeg: return "sliding-";
    case ContactMode::Separating: return "separating";
  }
  return "?";
}

std::pair<Vec2, Vec2> friction_cone(const Vec2& normal, double mu) {
  double a = std::atan(mu);
  return {rotated(normal, a), rotated(normal, -a)};
}

namespace {

struct Generator {
  Vec2 f;
  double torque;  // about ref, scaled by 1/char_len
  int entry;      // owning ContactEntry index
};

void append_generators(const ContactEntry& e, int idx, const Vec2& ref,
                       double char_len, std::vector<Generator>& gens) {
  auto add_point = [&](const Vec2& p) {
    auto [left, right] = friction_cone(e.contact.normal, e.mu);
    if (e.allow_left) gens.push_back({left, cross(p - ref, left) / char_len, idx});
    if (e.allow_right && !(e.mu == 0.0 && e.allow_left))
      gens.push_back({right, cross(p - ref, right) / char_len, idx});
  };
  if (e.contact.line_contact) {
    add_point(e.contact.line_p0);
    add_point(e.contact.line_p1);
  } else {
    add_point(e.contact.point);
  }
}

}  // namespace

EquilibriumResult equilibrium_feasible(const std::vector<ContactEntry>& contacts,
                                       const Wrench& external, const Vec2& ref,
                                       double char_len) {
  EquilibriumResult res;
  std::vector<Generator> gens;
  for (size_t i = 0; i < contacts.size(); ++i)
    append_generators(contacts[i], static_cast<int>(i), ref, char_len, gens);

  Wrench ext = external;
  ext.torque /= char_len;

  if (gens.empty()) {
    bool zero = norm(ext.force) <= 1e-12 && std::abs(ext.torque) <= 1e-12;
    res.feasible = zero;
    return res;
  }

  std::vector<std::vector<double>> A(3, std::vector<double>(gens.size()));
  for (size_t j = 0; j < gens.size(); ++j) {
    A[0][j] = gens[j].f.x;
    A[1][j] = gens[j].f.y;
    A[2][j] = gens[j].torque;
  }
  std::vector<double> b{-ext.force.x, -ext.force.y, -ext.torque};
  auto lin = solve_linear_feasibility(A, b);
  res.feasible = lin.feasible;
  res.residual = lin.residual;
  if (!lin.feasible) return res;

  res.coefficients = lin.x;
  res.reactions.resize(contacts.size());
  for (size_t i = 0; i < contacts.size(); ++i)
    res.reactions[i] = {contacts[i].contact, Vec2{0, 0}};
  for (size_t j = 0; j < gens.size(); ++j)
    res.reactions[gens[j].entry].f += gens[j].f * lin.x[j];
  return res;
}

ContactMode classify_mode(const Contact& contact, const Twist& twist,
                          double char_len) {
  double v_eps = 1e-6 * char_len;
  Vec2 v = twist.velocity_at(contact.point);
  double vn = dot(v, contact.normal);
  if (vn > v_eps) return ContactMode::Separating;
  Vec2 t = perp(contact.normal);
  double vt = dot(v, t);
  if (std::abs(vt) > v_eps)
    return vt > 0 ? ContactMode::SlidingPos : ContactMode::SlidingNeg;
  if (std::abs(twist.omega) > 1e-9) return ContactMode::Rolling;
  return ContactMode::Sticking;
}

bool force_closure(const std::vector<ContactEntry>& contacts, const Vec2& ref,
                   double char_len) {
  std::vector<Generator> gens;
  for (size_t i = 0; i < contacts.size(); ++i)
    append_generators(contacts[i], static_cast<int>(i), ref, char_len, gens);
  if (gens.size() < 3) return false;

  // Origin strictly interior to the convex hull of normalized generator
  // wrenches: for every unit direction u, some generator has g.u > 0.
  // Equivalently the dual cone {u : g_i . u <= 0 for all i} is {0}. Test by
  // linear feasibility: u = u+ - u-, g_i.u + slack = 0, sum(u+ + u-) = 1.
  size_t k = gens.size();
  std::vector<std::array<double, 3>> G(k);
  for (size_t i = 0; i < k; ++i) {
    double n = std::sqrt(norm2(gens[i].f) + gens[i].torque * gens[i].torque);
    if (n <= 1e-12) continue;
    G[i] = {gens[i].f.x / n, gens[i].f.y / n, gens[i].torque / n};
  }
  size_t ncols = 6 + k;  // u+ (3), u- (3), slack per generator
  std::vector<std::vector<double>> A(k + 1, std::vector<double>(ncols, 0.0));
  std::vector<double> b(k + 1, 0.0);
  for (size_t i = 0; i < k; ++i) {
    for (int d = 0; d < 3; ++d) {
      A[i][d] = G[i][d];
      A[i][3 + d] = -G[i][d];
    }
    A[i][6 + i] = 1.0;
  }
  for (int d = 0; d < 6; ++d) A[k][d] = 1.0;
  b[k] = 1.0;
  auto lin = solve_linear_feasibility(A, b);
  return !lin.feasible;
}

QualityResult grasp_quality(const std::vector<ContactEntry>& grasp_contacts,
                            const std::vector<QualityInput>& motion_samples,
                            const Vec2& ref, double char_len, double w1, double w2) {
  QualityResult q;
  q.s = force_closure(grasp_contacts, ref, char_len) ? 0.0 : 1.0;
  double sum = 0.0;
  int count = 0;
  for (const auto& sample : motion_samples) {
    for (const auto& r : sample.grasp_reactions) {
      double mag = norm(r.f);
      if (mag <= 1e-9) continue;  // unloaded contact: angle undefined
      double c = std::clamp(dot(r.f, r.contact.normal) / mag, -1.0, 1.0);
      sum += std::acos(c);
      ++count;
    }
  }
  if (count > 0) {
    q.alpha = sum / count;
    q.alpha_defined = true;
  } else {
    q.alpha = 0.0;
    q.alpha_defined = false;
  }
  q.score = w1 * q.s + w2 * q.alpha;
  return q;
}

bool certificate_valid(const std::vector<ContactEntry>& contacts,
                       const std::vector<double>& coefficients,
                       const Wrench& external, const Vec2& ref, double char_len,
                       double tol) {
  std::vector<Generator> gens;
  for (size_t i = 0; i < contacts.size(); ++i)
    append_generators(contacts[i], static_cast<int>(i), ref, char_len, gens);
  if (coefficients.size() != gens.size()) return false;
  Vec2 f{0, 0};
  double tau = 0.0;
  for (size_t j = 0; j < gens.size(); ++j) {
    if (coefficients[j] < -tol) return false;
    f += gens[j].f * coefficients[j];
    tau += gens[j].torque * coefficients[j];
  }
  Wrench ext = external;
  ext.torque /= char_len;
  double scale = std::max({1.0, norm(ext.force), std::abs(ext.torque)});
  return norm(f + ext.force) <= tol * scale && std::abs(tau + ext.torque) <= tol * scale;
}

}  // namespace ldhp
