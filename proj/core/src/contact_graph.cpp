#include "ldhp/contact_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "ldhp/contact.hpp"

namespace ldhp {

int ContactGraph::find_state(StateKind kind, int obj_feature, int env_edge) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].kind == kind && nodes[i].obj_feature == obj_feature &&
        nodes[i].env_edge == env_edge)
      return static_cast<int>(i);
  return -1;
}

Pose2 nearest_contact_pose(const Pose2& t, const Scene& scene,
                           const PlannerConfig& cfg) {
  if (!detect_contacts(scene.object, t, scene.env, cfg.contact_eps, cfg.angle_eps)
           .empty())
    return t;
  if (collides(scene.object, t, scene.env, cfg.contact_eps))
    throw NoContactReachable("pose already colliding");

  Aabb env_bb = bounds_of(scene.env.vertices);
  double limit = 2.0 * std::max(env_bb.diag(), scene.char_length());

  auto poly = transform_points(scene.object.vertices, t);
  int n = static_cast<int>(poly.size());

  // First-contact distance along dir by ray casting object vertices against env
  // segments and env vertices against object edges (reverse rays).
  auto first_contact = [&](Vec2 dir) -> double {
    double best = 1e300;
    auto ray_vs_segment = [&](const Vec2& o, const Vec2& d, const Segment& s) {
      Vec2 e = s.b - s.a;
      double denom = cross(d, e);
      if (std::abs(denom) < 1e-12) return;
      double u = cross(s.a - o, d) / denom;
      double ts = cross(s.a - o, e) / denom;
      if (u >= -1e-9 && u <= 1 + 1e-9 && ts > 1e-9) best = std::min(best, ts);
    };
    for (const auto& v : poly)
      for (int j = 0; j < scene.env.num_edges(); ++j)
        ray_vs_segment(v, dir, scene.env.edge(j));
    for (const auto& w : scene.env.vertices)
      for (int i = 0; i < n; ++i)
        ray_vs_segment(w, -dir, Segment{poly[i], poly[(i + 1) % n]});
    return best;
  };

  const Vec2 dirs[4] = {{0, -1}, {0, 1}, {-1, 0}, {1, 0}};
  double best_d = 1e300;
  Vec2 best_dir{0, -1};
  for (const auto& d : dirs) {
    double dist = first_contact(d);
    if (dist < best_d - 1e-9) {
      best_d = dist;
      best_dir = d;
    }
  }
  if (best_d > limit) throw NoContactReachable("no contact within workspace bounds");
  Vec2 off = best_dir * best_d;
  return Pose2(t.x + off.x, t.y + off.y, t.theta);
}

namespace {

// 0: not a witness; 1: realizes the state plus incidental contacts;
// 2: realizes exactly the state's contact formation.
int witness_rank(const Scene& scene, const PlannerConfig& cfg, const Pose2& pose,
                 StateKind kind, int obj_feature, int env_edge) {
  if (collides(scene.object, pose, scene.env, cfg.contact_eps)) return 0;
  auto cs = detect_contacts(scene.object, pose, scene.env, cfg.contact_eps,
                            cfg.angle_eps);
  bool found = false;
  for (const auto& c : cs) {
    if (kind == StateKind::EdgeEdge && c.kind == ContactKind::ObjEdgeOnEnvEdge &&
        c.obj_feature == obj_feature && c.other_feature == env_edge)
      found = true;
    if (kind == StateKind::VertexEdge && c.kind == ContactKind::ObjVertexOnEnvEdge &&
        c.obj_feature == obj_feature && c.other_feature == env_edge)
      found = true;
  }
  if (!found) return 0;
  return cs.size() == 1 ? 2 : 1;
}

}  // namespace

std::vector<ContactState> enumerate_contact_states(const Scene& scene,
                                                   const PlannerConfig& cfg) {
  std::vector<ContactState> out;
  const auto& obj = scene.object;
  const auto& env = scene.env;
  Vec2 up = -scene.gravity_dir;

  for (int j = 0; j < env.num_edges(); ++j) {
    Segment ej = env.edge(j);
    Vec2 mid = (ej.a + ej.b) * 0.5;
    Vec2 n_raw = env.edge_normal(j);
    // Prefer the side whose support normal opposes gravity.
    std::vector<int> sides =
        dot(n_raw, up) >= 0 ? std::vector<int>{+1, -1} : std::vector<int>{-1, +1};

    // Edge-edge states.
    for (int i = 0; i < obj.num_edges(); ++i) {
      Segment oi = obj.edge(i);
      int best_rank = 0;
      ContactState best;
      for (int side : sides) {
        Vec2 n = n_raw * side;  // points from env toward the object
        double theta = wrap_angle(angle_of(-n) - angle_of(obj.edge_outward(i)));
        // Object-frame midpoint of edge i placed at candidate spots on ej.
        double Li = oi.length(), Lj = ej.length();
        double h = std::abs(Lj - Li) * 0.5;
        std::vector<double> offs{0.0, h, -h, Lj * 0.25, -Lj * 0.25,
                                 (Li + Lj) * 0.25, -(Li + Lj) * 0.25};
        for (double off : offs) {
          Vec2 target = mid + ej.dir() * off;
          Vec2 mi_obj = (oi.a + oi.b) * 0.5;
          Vec2 mi_rot = rotated(mi_obj, theta);
          Pose2 pose(target.x - mi_rot.x, target.y - mi_rot.y, theta);
          int rank = witness_rank(scene, cfg, pose, StateKind::EdgeEdge, i, j);
          if (rank > best_rank) {
            best_rank = rank;
            best.kind = StateKind::EdgeEdge;
            best.obj_feature = i;
            best.env_edge = j;
            best.label = "l" + std::to_string(i + 1) + "e" + std::to_string(j + 1);
            best.witness = pose;
            best.side = side;
          }
          if (best_rank == 2) break;
        }
        if (best_rank == 2) break;
      }
      if (best_rank > 0) out.push_back(best);
    }

    // Vertex-edge states: balanced pose (CoM against gravity above the
    // vertex) with tilt fallbacks; wall contacts need substantial tilts.
    for (int v = 0; v < obj.num_edges(); ++v) {
      Vec2 rel = obj.com - obj.vertices[v];
      int best_rank = 0;
      ContactState best;
      double theta0 = wrap_angle(angle_of(up) - angle_of(rel));
      std::vector<double> dths{0.0};
      for (int k = 1; k <= 8; ++k) {
        dths.push_back(0.35 * k);
        dths.push_back(-0.35 * k);
      }
      for (int side : sides) {
        for (double dth : dths) {
          double theta = wrap_angle(theta0 + dth);
          for (double off : {0.0, ej.length() * 0.25, -ej.length() * 0.25}) {
            Vec2 target = mid + ej.dir() * off;
            Vec2 v_rot = rotated(obj.vertices[v], theta);
            Pose2 pose(target.x - v_rot.x, target.y - v_rot.y, theta);
            int rank = witness_rank(scene, cfg, pose, StateKind::VertexEdge, v, j);
            if (rank > best_rank) {
              best_rank = rank;
              best.kind = StateKind::VertexEdge;
              best.obj_feature = v;
              best.env_edge = j;
              best.label = "v" + std::to_string(v + 1) + "e" + std::to_string(j + 1);
              best.witness = pose;
              best.side = side;
            }
            if (best_rank == 2) break;
          }
          if (best_rank == 2) break;
        }
        if (best_rank == 2) break;
      }
      if (best_rank > 0) out.push_back(best);
    }
  }

  std::sort(out.begin(), out.end(), [](const ContactState& a, const ContactState& b) {
    if (a.env_edge != b.env_edge) return a.env_edge < b.env_edge;
    if (a.kind != b.kind) return a.kind == StateKind::VertexEdge;
    return a.obj_feature < b.obj_feature;
  });
  return out;
}

ContactGraph build_contact_graph(const Scene& scene, const PlannerConfig& cfg) {
  ContactGraph g;
  g.nodes = enumerate_contact_states(scene, cfg);
  const auto& obj = scene.object;
  const auto& env = scene.env;
  int n_obj = obj.num_edges();

  auto add_edge = [&](GraphEdge e) {
    for (const auto& o : g.edges)
      if (o.from == e.from && o.to == e.to && o.kind == e.kind &&
          o.pivot_vertex == e.pivot_vertex && o.bp_vertex == e.bp_vertex &&
          o.bp_obj_edge == e.bp_obj_edge && o.bp_env_q == e.bp_env_q)
        return;
    g.edges.push_back(e);
  };

  // Tip edges: vertex state <-> incident edge states on the same env edge.
  // Edge weights follow the contact-change penalty: a tip balances on a
  // single vertex (2), a biplanar slide keeps two supports (1), a push keeps
  // the flush contact (0), an air-move breaks everything (3).
  if (!cfg.disabled("tip")) {
    for (size_t vi = 0; vi < g.nodes.size(); ++vi) {
      if (g.nodes[vi].kind != StateKind::VertexEdge) continue;
      int v = g.nodes[vi].obj_feature;
      int e = g.nodes[vi].env_edge;
      for (int l : {(v + n_obj - 1) % n_obj, v}) {
        int li = g.find_state(StateKind::EdgeEdge, l, e);
        if (li < 0) continue;
        GraphEdge a;
        a.kind = GraphEdgeKind::Tip;
        a.weight = 1.02;
        a.pivot_vertex = v;
        a.from = li;
        a.to = static_cast<int>(vi);
        add_edge(a);
        std::swap(a.from, a.to);
        add_edge(a);
      }
    }
  }

  // Push self-loops (in-state translations; not used by the search).
  if (!cfg.disabled("push")) {
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.nodes[i].kind != StateKind::EdgeEdge) continue;
      GraphEdge a;
      a.kind = GraphEdgeKind::PushLoop;
      a.weight = 1.0;
      a.from = a.to = static_cast<int>(i);
      add_edge(a);
    }
  }

  // Biplanar edges across adjacent env edge pairs: the guided slide enters
  // from the wall-side flush state (or leaves toward it) while the riding
  // vertex stays on the support edge p. These are the wall-contact <->
  // bottom-contact transitions of the slot tasks.
  if (!cfg.disabled("biplanar-slide")) {
    for (int p = 0; p < env.num_edges(); ++p) {
      for (int q : {p - 1, p + 1}) {
        if (q < 0 || q >= env.num_edges()) continue;
        for (int v = 0; v < n_obj; ++v) {
          int l_prev = (v + n_obj - 1) % n_obj;  // edge ending at v
          int l_next = v;                        // edge starting at v
          for (int riding : {l_prev, l_next}) {
            int to_flush = g.find_state(StateKind::EdgeEdge, riding, p);
            int vertex_state = g.find_state(StateKind::VertexEdge, v, p);
            int wall_flush = g.find_state(StateKind::EdgeEdge, riding, q);
            GraphEdge a;
            a.kind = GraphEdgeKind::Biplanar;
            a.weight = 1.01;
            a.bp_vertex = v;
            a.bp_obj_edge = riding;
            a.bp_env_p = p;
            a.bp_env_q = q;
            if (wall_flush >= 0 && to_flush >= 0) {
              a.from = wall_flush; a.to = to_flush; add_edge(a);
              std::swap(a.from, a.to); add_edge(a);
            }
            if (wall_flush >= 0 && vertex_state >= 0) {
              a.from = wall_flush; a.to = vertex_state; add_edge(a);
              std::swap(a.from, a.to); add_edge(a);
            }
          }
        }
      }
    }
  }

  // Air-move edges between any two states.
  if (!cfg.disabled("air-move")) {
    for (size_t i = 0; i < g.nodes.size(); ++i)
      for (size_t j = 0; j < g.nodes.size(); ++j) {
        if (i == j) continue;
        GraphEdge a;
        a.kind = GraphEdgeKind::Air;
        a.weight = 1.03;
        a.from = static_cast<int>(i);
        a.to = static_cast<int>(j);
        add_edge(a);
      }
  }
  return g;
}

std::optional<std::vector<int>> shortest_state_path(const ContactGraph& g, int src,
                                                    int dst,
                                                    const std::vector<int>& skip_edges) {
  size_t n = g.nodes.size();
  std::vector<double> dist(n, 1e300);
  std::vector<int> prev_edge(n, -1);
  std::vector<bool> done(n, false);
  dist[src] = 0;
  for (;;) {
    int u = -1;
    for (size_t i = 0; i < n; ++i)
      if (!done[i] && dist[i] < 1e299 && (u < 0 || dist[i] < dist[u] ||
          (dist[i] == dist[u] && static_cast<int>(i) < u)))
        u = static_cast<int>(i);
    if (u < 0) break;
    done[u] = true;
    if (u == dst) break;
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
      if (std::find(skip_edges.begin(), skip_edges.end(), static_cast<int>(ei)) !=
          skip_edges.end())
        continue;
      const auto& e = g.edges[ei];
      if (e.from != u || e.from == e.to) continue;
      double nd = dist[u] + e.weight;
      if (nd < dist[e.to] - 1e-12) {
        dist[e.to] = nd;
        prev_edge[e.to] = static_cast<int>(ei);
      }
    }
  }
  if (dist[dst] > 1e299) return std::nullopt;
  std::vector<int> edges;
  int cur = dst;
  while (cur != src) {
    int ei = prev_edge[cur];
    if (ei < 0) break;
    edges.push_back(ei);
    cur = g.edges[ei].from;
  }
  std::reverse(edges.begin(), edges.end());
  return edges;
}

std::optional<int> classify_pose_state(const ContactGraph& g, const Scene& scene,
                                       const PlannerConfig& cfg, const Pose2& t) {
  auto cs = detect_contacts(scene.object, t, scene.env, cfg.contact_eps, cfg.angle_eps);
  // Prefer flush edge-edge contacts, then vertex contacts, lowest indices first.
  std::sort(cs.begin(), cs.end(), [](const Contact& a, const Contact& b) {
    auto rank = [](const Contact& c) {
      return c.kind == ContactKind::ObjEdgeOnEnvEdge ? 0
             : c.kind == ContactKind::ObjVertexOnEnvEdge ? 1 : 2;
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    if (a.obj_feature != b.obj_feature) return a.obj_feature < b.obj_feature;
    return a.other_feature < b.other_feature;
  });
  for (const auto& c : cs) {
    if (c.kind == ContactKind::ObjEdgeOnEnvEdge) {
      int s = g.find_state(StateKind::EdgeEdge, c.obj_feature, c.other_feature);
      if (s >= 0) return s;
    } else if (c.kind == ContactKind::ObjVertexOnEnvEdge) {
      int s = g.find_state(StateKind::VertexEdge, c.obj_feature, c.other_feature);
      if (s >= 0) return s;
    }
  }
  return std::nullopt;
}

namespace {

double flush_theta(const Scene& scene, const ContactState& s) {
  Vec2 n = scene.env.edge_normal(s.env_edge) * s.side;
  return wrap_angle(angle_of(-n) - angle_of(scene.object.edge_outward(s.obj_feature)));
}

struct Proposal {
  std::vector<int> edges;  // edge ids of the sigma path (may be empty)
  int variant = 0;         // terminal tip policy: 0 direct, 1 via witness
};

// Deterministic proposal list: k-shortest sigma paths by single-edge
// exclusion, crossed with terminal-transition variants, ranked by how closely
// the terminal transition's contact structure matches the goal contact pose
// (the distance-to-goal part of the sampling heuristic). When start and goal
// share a state, two- and three-hop excursions stand in for the (empty)
// shortest path's alternatives.
std::vector<Proposal> make_proposals(const ContactGraph& g, int src, int dst,
                                     int max_count, int goal_contacts) {
  std::vector<std::vector<int>> paths;
  if (src == dst) {
    struct Cyc {
      double w;
      std::vector<int> es;
    };
    std::vector<Cyc> cycles;
    std::vector<int> from_src;
    for (size_t e = 0; e < g.edges.size(); ++e)
      if (g.edges[e].from == src && g.edges[e].to != src)
        from_src.push_back(static_cast<int>(e));
    for (int e1 : from_src) {
      for (size_t e2 = 0; e2 < g.edges.size(); ++e2) {
        if (g.edges[e2].from != g.edges[e1].to) continue;
        if (static_cast<int>(e2) == e1) continue;
        if (g.edges[e2].to == dst) {
          cycles.push_back({g.edges[e1].weight + g.edges[e2].weight,
                            {e1, static_cast<int>(e2)}});
          continue;
        }
        if (g.edges[e2].to == src) continue;
        for (size_t e3 = 0; e3 < g.edges.size(); ++e3) {
          if (g.edges[e3].from != g.edges[e2].to || g.edges[e3].to != dst)
            continue;
          cycles.push_back(
              {g.edges[e1].weight + g.edges[e2].weight + g.edges[e3].weight,
               {e1, static_cast<int>(e2), static_cast<int>(e3)}});
        }
      }
    }
    std::sort(cycles.begin(), cycles.end(), [](const Cyc& a, const Cyc& b) {
      if (a.w != b.w) return a.w < b.w;
      return a.es < b.es;
    });
    for (const auto& c : cycles) {
      paths.push_back(c.es);
      if (static_cast<int>(paths.size()) >= 6 * max_count) break;
    }
  } else {
    auto base = shortest_state_path(g, src, dst, {});
    if (base) paths.push_back(*base);
    if (!paths.empty()) {
      // Alternatives: exclude one edge of the base path at a time, heaviest
      // first.
      std::vector<int> order = paths[0];
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.edges[a].weight != g.edges[b].weight)
          return g.edges[a].weight > g.edges[b].weight;
        return a < b;
      });
      for (int ei : order) {
        auto alt = shortest_state_path(g, src, dst, {ei});
        if (!alt) continue;
        if (std::find(paths.begin(), paths.end(), *alt) == paths.end())
          paths.push_back(*alt);
        if (static_cast<int>(paths.size()) >= max_count) break;
      }
    }
  }
  // Rank: terminal-contact distance to the goal first, then path weight.
  auto terminal_contacts = [&](const std::vector<int>& p) {
    if (p.empty()) return 1;
    return g.edges[p.back()].kind == GraphEdgeKind::Biplanar ? 2 : 1;
  };
  auto weight_of = [&](const std::vector<int>& p) {
    double w = 0;
    for (int e : p) w += g.edges[e].weight;
    return w;
  };
  std::stable_sort(paths.begin(), paths.end(),
                   [&](const std::vector<int>& a, const std::vector<int>& b) {
                     int da = std::abs(goal_contacts - terminal_contacts(a));
                     int db = std::abs(goal_contacts - terminal_contacts(b));
                     if (da != db) return da < db;
                     double wa = weight_of(a), wb = weight_of(b);
                     if (wa != wb) return wa < wb;
                     return a < b;
                   });
  std::vector<Proposal> out;
  for (const auto& p : paths) {
    bool terminal_tip = !p.empty() &&
                        g.edges[p.back()].kind == GraphEdgeKind::Tip &&
                        g.nodes[g.edges[p.back()].to].kind == StateKind::VertexEdge;
    if (terminal_tip) {
      out.push_back({p, 0});
      out.push_back({p, 1});
    } else {
      out.push_back({p, 0});
    }
    if (static_cast<int>(out.size()) >= max_count) break;
  }
  return out;
}

}  // namespace

namespace {
PosePath assemble_proposal(const ContactGraph& g, const Scene& scene,
                           const PlannerConfig& cfg, const Proposal& prop,
                           const Pose2& tp0, const Pose2& tpg, int s0);
}  // namespace

PosePath plan_pose_path(const Scene& scene, const PlannerConfig& cfg, int attempt) {
  ContactGraph g = build_contact_graph(scene, cfg);
  Pose2 tp0 = nearest_contact_pose(scene.t0, scene, cfg);
  Pose2 tpg = nearest_contact_pose(scene.tg, scene, cfg);
  auto s0 = classify_pose_state(g, scene, cfg, tp0);
  auto sM = classify_pose_state(g, scene, cfg, tpg);
  if (!s0 || !sM)
    throw TopTierFailure("start or goal contact pose matches no enumerated state");

  int goal_contacts = static_cast<int>(
      detect_contacts(scene.object, tpg, scene.env, cfg.contact_eps, cfg.angle_eps)
          .size());
  goal_contacts = std::min(goal_contacts, 2);

  std::vector<Proposal> proposals;
  if (*s0 == *sM) proposals.push_back({{}, 0});  // trivial in-state proposal
  auto more = make_proposals(g, *s0, *sM, std::max(4, 4 * cfg.h_max), goal_contacts);
  proposals.insert(proposals.end(), more.begin(), more.end());

  // Proposals that cannot even be assembled into a pose trajectory are not
  // counted as attempts; the attempt index walks the assemblable ones.
  int assembled = 0;
  std::string last_error = "no top-tier proposals";
  for (const auto& prop : proposals) {
    std::optional<PosePath> candidate;
    try {
      candidate = assemble_proposal(g, scene, cfg, prop, tp0, tpg, *s0);
    } catch (const TopTierFailure& e) {
      last_error = e.what();
      continue;
    }
    if (assembled == attempt) {
      candidate->attempt = attempt;
      return *candidate;
    }
    ++assembled;
  }
  throw TopTierFailure("no further top-tier proposals (" + last_error + ")");
}

namespace {
PosePath assemble_proposal(const ContactGraph& g, const Scene& scene,
                           const PlannerConfig& cfg, const Proposal& prop,
                           const Pose2& tp0, const Pose2& tpg, int s0) {
  const double lin_tol = 1e-3, ang_tol = 1e-6;
  PosePath path;
  path.poses.push_back(scene.t0);
  path.labels.push_back("");
  path.state_sequence.push_back(s0);

  auto push_move = [&](const PrimitiveInstance& m, const Pose2& next,
                       const std::string& label) {
    path.moves.push_back(m);
    path.poses.push_back(next);
    path.labels.push_back(label);
  };

  Pose2 cur = scene.t0;
  auto air_to = [&](const Pose2& target, bool lifted) {
    if (pose_close(cur, target, lin_tol, ang_tol)) return true;
    if (cfg.disabled("air-move")) return false;
    std::vector<Pose2> wp;
    wp.push_back(cur);
    if (lifted) {
      double lift = 0.3 * scene.char_length();
      wp.emplace_back(cur.x, cur.y + lift, cur.theta);
      wp.emplace_back(target.x, target.y + lift, target.theta);
    }
    wp.push_back(target);
    PrimitiveInstance m = PrimitiveInstance::make_air(wp);
    push_move(m, target, "");
    cur = target;
    return true;
  };

  // Entry air-move to the start contact pose.
  if (!pose_close(cur, tp0, lin_tol, ang_tol)) {
    if (!air_to(tp0, false)) throw TopTierFailure("entry air-move disabled");
  }
  path.labels.back() = g.nodes[s0].label;
  int cur_state = s0;

  // In-state alignment helper: push for edge states, tip for vertex states.
  auto align_to = [&](const Pose2& target) -> bool {
    const ContactState& st = g.nodes[cur_state];
    if (st.kind == StateKind::EdgeEdge) {
      if (std::abs(wrap_angle(cur.theta - target.theta)) > 1e-6) return false;
      Vec2 d = target.translation() - cur.translation();
      Vec2 dir = scene.env.edge(st.env_edge).dir();
      double travel = dot(d, dir);
      if (norm(d - dir * travel) > lin_tol) return false;
      if (std::abs(travel) <= lin_tol) return true;
      if (cfg.disabled("push")) return false;
      auto m = PrimitiveInstance::make_push(st.env_edge, travel, st.obj_feature);
      push_move(m, apply_move(m, cur, scene), st.label);
      cur = path.poses.back();
      return true;
    }
    // Vertex state: rotation about the contact vertex only.
    Vec2 pivot = cur.apply(scene.object.vertices[st.obj_feature]);
    double ang = wrap_angle(target.theta - cur.theta);
    Vec2 target_pivot = target.apply(scene.object.vertices[st.obj_feature]);
    if (norm(pivot - target_pivot) > lin_tol) return false;
    if (std::abs(ang) <= 1e-9) return true;
    if (cfg.disabled("tip")) return false;
    auto m = PrimitiveInstance::make_tip(pivot, ang, st.obj_feature, st.env_edge);
    Pose2 next = apply_move(m, cur, scene);
    if (!pose_close(next, target, lin_tol, ang_tol)) return false;
    push_move(m, next, st.label);
    cur = next;
    return true;
  };

  for (size_t h = 0; h < prop.edges.size(); ++h) {
    const GraphEdge& e = g.edges[prop.edges[h]];
    const ContactState& to_state = g.nodes[e.to];
    bool terminal = (h + 1 == prop.edges.size());

    if (e.kind == GraphEdgeKind::Tip) {
      if (g.nodes[e.from].kind == StateKind::EdgeEdge) {
        // Edge -> vertex: choose target theta by variant; position the pivot
        // with an in-state pre-push when the target pose demands it.
        double theta_t;
        Pose2 anchor;  // pose whose pivot position binds
        if (terminal) {
          anchor = tpg;
          theta_t = (prop.variant == 0) ? tpg.theta : to_state.witness.theta;
        } else {
          anchor = cur;
          theta_t = to_state.witness.theta;
        }
        Vec2 pivot = anchor.apply(scene.object.vertices[e.pivot_vertex]);
        // Required flush start: same theta as cur, pivot vertex at `pivot`.
        Vec2 cur_pivot = cur.apply(scene.object.vertices[e.pivot_vertex]);
        Pose2 start(cur.x + (pivot.x - cur_pivot.x), cur.y + (pivot.y - cur_pivot.y),
                    cur.theta);
        if (!align_to(start)) throw TopTierFailure("cannot preposition for tip");
        double ang = wrap_angle(theta_t - cur.theta);
        if (std::abs(ang) < 1e-9) throw TopTierFailure("degenerate tip");
        auto m = PrimitiveInstance::make_tip(pivot, ang, e.pivot_vertex,
                                             to_state.env_edge);
        push_move(m, apply_move(m, cur, scene), to_state.label);
        cur = path.poses.back();
      } else {
        // Vertex -> edge: rotate about the current vertex position to flush.
        Vec2 pivot = cur.apply(scene.object.vertices[e.pivot_vertex]);
        double ang = wrap_angle(flush_theta(scene, to_state) - cur.theta);
        if (std::abs(ang) < 1e-9) throw TopTierFailure("degenerate tip");
        auto m = PrimitiveInstance::make_tip(pivot, ang, e.pivot_vertex,
                                             to_state.env_edge);
        push_move(m, apply_move(m, cur, scene), to_state.label);
        cur = path.poses.back();
      }
    } else if (e.kind == GraphEdgeKind::Biplanar) {
      BiplanarParams bp;
      bp.obj_vertex = e.bp_vertex;
      bp.obj_edge = e.bp_obj_edge;
      bp.env_edge_p = e.bp_env_p;
      bp.env_edge_q = e.bp_env_q;
      bp.theta_start = cur.theta;
      if (terminal)
        bp.theta_end = tpg.theta;
      else if (to_state.kind == StateKind::EdgeEdge)
        bp.theta_end = flush_theta(scene, to_state);
      else
        bp.theta_end = to_state.witness.theta;
      Pose2 start;
      try {
        start = biplanar_pose_at(bp, scene, bp.theta_start);
        (void)biplanar_pose_at(bp, scene, bp.theta_end);
      } catch (const DegenerateGeometry& ex) {
        throw TopTierFailure(std::string("biplanar start invalid: ") + ex.what());
      }
      if (!align_to(start)) throw TopTierFailure("cannot preposition for biplanar");
      PrimitiveInstance m;
      m.kind = PrimitiveKind::BiplanarSlide;
      m.biplanar = bp;
      push_move(m, apply_move(m, cur, scene), to_state.label);
      cur = path.poses.back();
    } else if (e.kind == GraphEdgeKind::Air) {
      // State-to-state air-moves are short hops; longer repositioning is the
      // job of in-contact primitives. Pre-position with an in-state push when
      // the current state supports one.
      Pose2 target = terminal ? tpg : to_state.witness;
      double cap = 0.5 * scene.char_length();
      const ContactState& st = g.nodes[cur_state];
      if (norm(target.translation() - cur.translation()) > cap &&
          st.kind == StateKind::EdgeEdge) {
        Vec2 dir = scene.env.edge(st.env_edge).dir();
        Vec2 d = target.translation() - cur.translation();
        double along = dot(d, dir);
        Vec2 rest = d - dir * along;
        double reach = std::sqrt(std::max(0.0, cap * cap - norm2(rest))) * 0.95;
        double travel = along - (along >= 0 ? reach : -reach);
        if (std::abs(travel) > 1e-6) {
          Pose2 pushed(cur.x + dir.x * travel, cur.y + dir.y * travel, cur.theta);
          if (!align_to(pushed))
            throw TopTierFailure("cannot preposition for air-move");
        }
      }
      if (norm(target.translation() - cur.translation()) > cap)
        throw TopTierFailure("air-move hop exceeds the short-segment range");
      if (!air_to(target, true)) throw TopTierFailure("air-move disabled");
      path.labels.back() = to_state.label;
    } else {
      throw TopTierFailure("unexpected edge kind in sigma path");
    }
    cur_state = e.to;
  }

  // Terminal in-state alignment to the goal contact pose.
  if (!pose_close(cur, tpg, lin_tol, ang_tol)) {
    if (!align_to(tpg))
      throw TopTierFailure("cannot align to goal contact pose within the state");
    if (!pose_close(cur, tpg, lin_tol, ang_tol))
      throw TopTierFailure("terminal alignment missed the goal contact pose");
  }
  // Exit air-move to the exact goal.
  if (!pose_close(cur, scene.tg, lin_tol, ang_tol)) {
    if (!air_to(scene.tg, false)) throw TopTierFailure("exit air-move disabled");
  }

  // Cheap object-collision screen over all segments.
  for (size_t k = 0; k < path.moves.size(); ++k) {
    auto samples = discretize_move(path.moves[k], path.poses[k], scene, 8);
    for (const auto& p : samples)
      if (collides(scene.object, p, scene.env, cfg.contact_eps))
        throw TopTierFailure("proposed pose path collides");
  }
  for (int ei : prop.edges) path.state_sequence.push_back(g.edges[ei].to);
  return path;
}

}  // namespace

std::string contact_graph_to_json(const ContactGraph& g) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) {
    j["nodes"].push_back({{"label", n.label},
                          {"kind", n.kind == StateKind::VertexEdge ? "vertex-edge"
                                                                   : "edge-edge"},
                          {"witness", {n.witness.x, n.witness.y, n.witness.theta}}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges) {
    const char* k = e.kind == GraphEdgeKind::Tip        ? "tip"
                    : e.kind == GraphEdgeKind::PushLoop ? "push"
                    : e.kind == GraphEdgeKind::Biplanar ? "biplanar-slide"
                                                        : "air-move";
    j["edges"].push_back({{"from", g.nodes[e.from].label},
                          {"to", g.nodes[e.to].label},
                          {"kind", k}});
  }
  return j.dump(2) + "\n";
}

}  // namespace ldhp
