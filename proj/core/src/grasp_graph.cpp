#include "ldhp/grasp_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ldhp {

namespace {

std::pair<int64_t, int64_t> pose_key(const Pose2& t) {
  auto q = [](double v) { return static_cast<int64_t>(std::llround(v * 1e6)); };
  return {q(t.x) * 4000037 + q(t.y), q(t.theta)};
}

std::string move_signature(const PrimitiveInstance& m, const Pose2& t) {
  std::ostringstream os;
  os.precision(9);
  os << primitive_kind_name(m.kind) << "|" << t.x << "," << t.y << "," << t.theta
     << "|";
  switch (m.kind) {
    case PrimitiveKind::Tip:
      os << m.tip.pivot.x << "," << m.tip.pivot.y << "," << m.tip.angle;
      break;
    case PrimitiveKind::Push:
      os << m.push.env_edge << "," << m.push.travel;
      break;
    case PrimitiveKind::BiplanarSlide:
      os << m.biplanar.obj_vertex << "," << m.biplanar.obj_edge << ","
         << m.biplanar.env_edge_p << "," << m.biplanar.env_edge_q << ","
         << m.biplanar.theta_start << "," << m.biplanar.theta_end;
      break;
    case PrimitiveKind::AirMove:
      for (const auto& w : m.air.waypoints) os << w.x << "," << w.y << "," << w.theta << ";";
      break;
    default:
      break;
  }
  return os.str();
}

}  // namespace

std::vector<int> pose_conditioned(const Scene& scene, const PlannerConfig& cfg,
                                  GraspCache& cache, const Pose2& t) {
  auto key = pose_key(t);
  auto it = cache.pose_sets.find(key);
  if (it != cache.pose_sets.end()) return it->second;
  if (cache.all.empty()) cache.all = enumerate_grasps(scene, cfg);
  std::vector<int> ids;
  for (size_t i = 0; i < cache.all.size(); ++i)
    if (grasp_feasible_at(cache.all[i], scene, t, cfg.contact_eps))
      ids.push_back(static_cast<int>(i));
  cache.pose_sets[key] = ids;
  return ids;
}

const GraspCache::SegmentData& motion_conditioned(const Scene& scene,
                                                  const PlannerConfig& cfg,
                                                  GraspCache& cache,
                                                  const PrimitiveInstance& m,
                                                  const Pose2& t) {
  std::string sig = move_signature(m, t);
  auto it = cache.segments.find(sig);
  if (it != cache.segments.end()) return it->second;

  GraspCache::SegmentData data;
  Pose2 end = apply_move(m, t, scene);
  auto g_t = pose_conditioned(scene, cfg, cache, t);
  auto g_e = pose_conditioned(scene, cfg, cache, end);
  std::set<int> end_set(g_e.begin(), g_e.end());

  Vec2 ref = t.apply(scene.object.com);
  for (int id : g_t) {
    if (!end_set.count(id)) continue;
    const Grasp& g = cache.all[id];
    if (!g.is_pair()) {
      // No-contact inter edges only for non-air segments the object can
      // traverse while environment-stable on its own.
      if (m.kind == PrimitiveKind::AirMove) continue;
      auto rep = move_feasible(m, t, scene, nullptr, cfg);
      if (!rep.feasible) continue;
      data.feasible.push_back(id);
      QualityResult q;
      q.s = 1.0;
      q.alpha = 0.0;
      q.score = cfg.w1;
      data.quality.push_back(q);
      data.cost.push_back(q.score);
      continue;
    }
    auto rep = move_feasible(m, t, scene, &g, cfg);
    if (!rep.feasible) continue;
    auto r = realize(g, scene.object, scene.gripper, t);
    auto entries = grasp_entries(r, scene.friction.mu_grip);
    auto q = grasp_quality(entries, rep.samples, ref, scene.char_length(), cfg.w1,
                           cfg.w2);
    data.feasible.push_back(id);
    data.quality.push_back(q);
    data.cost.push_back(q.score);
  }
  return cache.segments.emplace(sig, std::move(data)).first->second;
}

namespace {

struct RouteNode {
  Grasp g;
  std::vector<PrimitiveInstance> seq;
  std::vector<Grasp> states;
  double travel = 0.0;
};

}  // namespace

// Breadth-first reachability over {open, flip, pivot} from one grasp at a
// fixed pose. Slides toward specific targets and the approach-contact leg of
// the via-{0,0} route are composed at lookup time.
static std::vector<RouteNode> compute_reachable(const Scene& scene,
                                                const PlannerConfig& cfg,
                                                const Grasp& from, const Pose2& t,
                                                bool boundary_exempt) {
  struct Out {
    std::vector<RouteNode> nodes;
  } rs;
  Grasp start = canonical(from);
  std::set<GraspKey> visited{grasp_key(start)};
  rs.nodes.push_back({start, {}, {}, 0.0});
  size_t scan = 0;
  const size_t depth_cap = 3;
  const size_t node_cap = 64;

  auto candidate_actions = [&](const Grasp& g) {
    std::vector<PrimitiveInstance> acts;
    if (!g.is_pair()) return acts;  // approach handled at lookup
    if (!cfg.disabled("flip") && g.family == GraspFamily::Pinch) {
      PrimitiveInstance a;
      a.kind = PrimitiveKind::Flip;
      acts.push_back(a);
    }
    if (!cfg.disabled("pivot")) {
      // Pivot landings: intersections of the swing circle with edge lines.
      for (int f : {0, 1}) {
        GraspContact keep = f == 0 ? g.a : g.b;
        GraspContact move = f == 0 ? g.b : g.a;
        Vec2 pk = boundary_point(scene.object, keep.edge, keep.s);
        Vec2 pm = boundary_point(scene.object, move.edge, move.s);
        double rm = norm(pm - pk);
        for (int e = 0; e < scene.object.num_edges(); ++e) {
          Segment ee = scene.object.edge(e);
          Vec2 d = ee.dir();
          Vec2 rel = pk - ee.a;
          double proj = dot(rel, d);
          double h2 = norm2(rel - d * proj);
          double disc = rm * rm - h2;
          if (disc < 0) continue;
          double root = std::sqrt(disc);
          for (double s_land : {proj - root, proj + root}) {
            if (s_land < -1e-9 || s_land > ee.length() + 1e-9) continue;
            Vec2 pl = ee.a + d * s_land;
            double ang = wrap_angle(angle_of(pl - pk) - angle_of(pm - pk));
            if (std::abs(ang) < 1e-6) continue;
            PrimitiveInstance a;
            a.kind = PrimitiveKind::Pivot;
            a.pivot.finger = f;
            a.pivot.angle = ang;
            acts.push_back(a);
          }
        }
      }
    }
    if (!cfg.disabled("open")) {
      PrimitiveInstance a;
      a.kind = PrimitiveKind::Open;
      acts.push_back(a);
    }
    return acts;
  };

  size_t depth_end = 1;  // nodes[0..depth_end) are at the current depth
  for (size_t depth = 0; depth < depth_cap && rs.nodes.size() < node_cap; ++depth) {
    size_t level_end = rs.nodes.size();
    for (; scan < level_end && rs.nodes.size() < node_cap; ++scan) {
      RouteNode node = rs.nodes[scan];
      for (const auto& act : candidate_actions(node.g)) {
        Grasp g2;
        try {
          g2 = apply_adjust(act, node.g, t, scene, cfg);
        } catch (const std::exception&) {
          continue;
        }
        GraspKey k2 = grasp_key(g2);
        if (visited.count(k2)) continue;
        auto rep = adjust_feasible(act, node.g, t, scene, cfg, !boundary_exempt);
        if (!rep.feasible) continue;
        visited.insert(k2);
        RouteNode n2 = node;
        n2.g = g2;
        n2.seq.push_back(act);
        n2.states.push_back(g2);
        n2.travel += adjust_travel(act, node.g, t, scene);
        rs.nodes.push_back(std::move(n2));
      }
    }
  }
  (void)depth_end;
  return rs.nodes;
}

std::optional<IntraRoute> intra_route(const Scene& scene, const PlannerConfig& cfg,
                                      GraspCache& cache, const Grasp& from,
                                      const Grasp& to, const Pose2& t,
                                      bool boundary_exempt) {
  Grasp target = canonical(to);
  Grasp start = canonical(from);
  double diag = scene.char_length();
  double seat = cfg.seat_tol(scene.object);

  auto finish = [&](const RouteNode& n) {
    IntraRoute r;
    r.seq = n.seq;
    r.states = n.states;
    if (!r.states.empty()) r.states.back() = target;
    r.travel = n.travel;
    r.cost = cfg.lambda1 * (n.travel / diag) +
             cfg.lambda2 * static_cast<double>(n.seq.size());
    return r;
  };

  if (grasps_match(start, target, scene.object, 1e-6)) return IntraRoute{};

  // Cached reachability from this grasp at this pose.
  GraspCache::ReachKey rkey{pose_key(t), grasp_key(start), boundary_exempt};
  std::vector<RouteNode> nodes;
  auto rit = cache.reach.find(rkey);
  if (rit != cache.reach.end()) {
    for (const auto& r : rit->second) {
      RouteNode n;
      n.g = r.states.empty() ? start : r.states.back();
      n.seq = r.seq;
      n.states = r.states;
      n.travel = r.travel;
      nodes.push_back(std::move(n));
    }
  } else {
    nodes = compute_reachable(scene, cfg, from, t, boundary_exempt);
    std::vector<IntraRoute> stored;
    for (const auto& n : nodes) {
      IntraRoute r;
      r.seq = n.seq;
      r.states = n.states;
      r.travel = n.travel;
      stored.push_back(std::move(r));
    }
    cache.reach.emplace(rkey, std::move(stored));
  }
  struct {
    std::vector<RouteNode>& nodes;
  } rs{nodes};

  // Direct or reachable match.
  for (const auto& n : rs.nodes)
    if (grasps_match(n.g, target, scene.object, seat) &&
        n.g.is_pair() == target.is_pair())
      return finish(n);

  // Reached grasp plus one closing slide (rigid, or per-finger for an
  // actuated press).
  std::optional<IntraRoute> best;
  auto consider = [&](const RouteNode& n) {
    if (best && n.seq.size() + 1 >= best->seq.size()) return;
    if (!n.g.is_pair() || !target.is_pair()) return;
    if (n.g.family != target.family || n.g.a.edge != target.a.edge ||
        n.g.b.edge != target.b.edge || n.g.sigma != target.sigma)
      return;
    Segment ea = scene.object.edge(n.g.a.edge);
    double da = (target.a.s - n.g.a.s) * ea.length();
    double db = (target.b.s - n.g.b.s) * scene.object.edge(n.g.b.edge).length();
    std::vector<PrimitiveInstance> slides;
    if (std::abs(da - db) <= seat && std::abs(da) > 1e-9) {
      PrimitiveInstance s;
      s.kind = PrimitiveKind::Slide;
      s.slide.finger = -1;
      s.slide.darc = da;
      slides.push_back(s);
    } else if (n.g.family == GraspFamily::Press &&
               scene.gripper.variant == GripperVariant::ConfigII) {
      if (std::abs(da) <= seat && std::abs(db) > 1e-9) {
        PrimitiveInstance s;
        s.kind = PrimitiveKind::Slide;
        s.slide.finger = 1;
        s.slide.darc = db;
        slides.push_back(s);
      } else if (std::abs(db) <= seat && std::abs(da) > 1e-9) {
        PrimitiveInstance s;
        s.kind = PrimitiveKind::Slide;
        s.slide.finger = 0;
        s.slide.darc = da;
        slides.push_back(s);
      }
    }
    for (const auto& s : slides) {
      if (cfg.disabled("slide")) break;
      Grasp g2;
      try {
        g2 = apply_adjust(s, n.g, t, scene, cfg);
      } catch (const std::exception&) {
        continue;
      }
      if (!grasps_match(g2, target, scene.object, seat)) continue;
      auto rep = adjust_feasible(s, n.g, t, scene, cfg, !boundary_exempt);
      if (!rep.feasible) continue;
      RouteNode n2 = n;
      n2.g = target;
      n2.seq.push_back(s);
      n2.states.push_back(target);
      n2.travel += adjust_travel(s, n.g, t, scene);
      best = finish(n2);
    }
  };
  for (const auto& n : rs.nodes) consider(n);
  if (best) return best;

  // Via {0,0}: any reachable release plus an approach to the target.
  if (!cfg.disabled("approach-contact") && target.is_pair()) {
    for (const auto& n : rs.nodes) {
      if (n.g.is_pair()) continue;
      PrimitiveInstance a;
      a.kind = PrimitiveKind::ApproachContact;
      a.approach.target = target;
      auto rep = adjust_feasible(a, n.g, t, scene, cfg, !boundary_exempt);
      if (!rep.feasible) continue;
      RouteNode n2 = n;
      n2.g = target;
      n2.seq.push_back(a);
      n2.states.push_back(target);
      n2.travel += adjust_travel(a, n.g, t, scene);
      return finish(n2);
    }
  }
  // Release routes toward {0,0} itself.
  if (!target.is_pair()) {
    for (const auto& n : rs.nodes)
      if (!n.g.is_pair()) return finish(n);
  }
  return std::nullopt;
}

BottomTierResult plan_grasps(const Scene& scene, const PlannerConfig& cfg,
                             GraspCache& cache, const PosePath& path,
                             const InterReweight& reweight) {
  BottomTierResult res;
  int n = path.segments();

  // Pose-conditioned sizes (reported) and motion-conditioned sets per segment.
  std::vector<const GraspCache::SegmentData*> seg(n);
  for (int k = 0; k <= n; ++k) {
    auto gt = pose_conditioned(scene, cfg, cache, path.poses[k]);
    res.gt_sizes.push_back(static_cast<int>(gt.size()));
    res.node_count += static_cast<int64_t>(gt.size());
  }
  res.node_count += 2;
  for (int k = 0; k < n; ++k) {
    seg[k] = &motion_conditioned(scene, cfg, cache, path.moves[k], path.poses[k]);
    res.gm_sizes.push_back(static_cast<int>(seg[k]->feasible.size()));
  }
  for (int k = 0; k < n; ++k) {
    if (seg[k]->feasible.empty()) {
      res.fail_segment = k;
      res.fail_reason = "empty motion-conditioned grasp set";
      return res;
    }
  }

  // Layered search. Node = (layer, grasp id in cache.all; -1 = NoContact id).
  // Grasp ids come from segment sets plus the pinned source grasp.
  struct NodeRef {
    int layer;
    int gid;
    bool operator<(const NodeRef& o) const {
      if (layer != o.layer) return layer < o.layer;
      return gid < o.gid;
    }
  };
  int none_id = -1;
  for (size_t i = 0; i < cache.all.size(); ++i)
    if (!cache.all[i].is_pair()) none_id = static_cast<int>(i);

  std::map<NodeRef, double> dist;
  std::map<NodeRef, std::pair<NodeRef, IntraRoute>> parent_intra;
  std::map<NodeRef, NodeRef> parent_inter;
  std::map<NodeRef, bool> via_inter;

  auto cmp = [](const std::pair<double, NodeRef>& a,
                const std::pair<double, NodeRef>& b) {
    if (a.first != b.first) return a.first > b.first;
    return b.second < a.second;
  };
  std::priority_queue<std::pair<double, NodeRef>,
                      std::vector<std::pair<double, NodeRef>>, decltype(cmp)>
      pq(cmp);

  NodeRef src{0, none_id};
  dist[src] = 0.0;
  pq.push({0.0, src});
  std::set<NodeRef> settled;
  std::optional<NodeRef> goal;
  int deepest = 0;

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (settled.count(u)) continue;
    settled.insert(u);
    deepest = std::max(deepest, u.layer);
    if (u.layer == n) {
      goal = u;
      break;
    }
    bool exempt = (u.layer == 0 || u.layer == n);
    // Inter edge: same grasp across segment u.layer.
    const auto& sd = *seg[u.layer];
    for (size_t i = 0; i < sd.feasible.size(); ++i) {
      if (sd.feasible[i] != u.gid) continue;
      double w = sd.cost[i];
      if (reweight) w *= reweight(cache.all[u.gid], u.layer);
      NodeRef v{u.layer + 1, u.gid};
      auto it = dist.find(v);
      if (it == dist.end() || d + w < it->second - 1e-12) {
        dist[v] = d + w;
        parent_inter[v] = u;
        via_inter[v] = true;
        pq.push({d + w, v});
      }
    }
    // Intra edges: regrasp at this layer toward grasps usable on the next
    // segment (skip if this node already works for it).
    for (size_t i = 0; i < sd.feasible.size(); ++i) {
      int gid = sd.feasible[i];
      if (gid == u.gid) continue;
      NodeRef v{u.layer, gid};
      if (settled.count(v)) continue;
      auto route = intra_route(scene, cfg, cache, cache.all[u.gid],
                               cache.all[gid], path.poses[u.layer], exempt);
      if (!route) continue;
      auto it = dist.find(v);
      if (it == dist.end() || d + route->cost < it->second - 1e-12) {
        dist[v] = d + route->cost;
        parent_intra[v] = {u, *route};
        via_inter[v] = false;
        pq.push({d + route->cost, v});
      }
    }
  }

  if (!goal) {
    res.fail_segment = std::min(deepest, n - 1);
    res.fail_reason = "no grasp route through layer " + std::to_string(deepest);
    return res;
  }

  // Reconstruct: walk back to the source, then emit forward.
  res.ok = true;
  res.plan.cost = dist[*goal];
  res.plan.seg_grasp.assign(n, Grasp::none());
  res.plan.intra.assign(n + 1, {});
  struct Hop {
    NodeRef node;
    bool inter;
    IntraRoute route;
  };
  std::vector<Hop> hops;
  NodeRef cur = *goal;
  while (!(cur.layer == src.layer && cur.gid == src.gid)) {
    if (via_inter[cur]) {
      hops.push_back({cur, true, {}});
      cur = parent_inter[cur];
    } else {
      auto& pr = parent_intra[cur];
      hops.push_back({cur, false, pr.second});
      cur = pr.first;
    }
  }
  std::reverse(hops.begin(), hops.end());
  for (const auto& h : hops) {
    if (h.inter)
      res.plan.seg_grasp[h.node.layer - 1] = cache.all[h.node.gid];
    else
      res.plan.intra[h.node.layer].push_back(h.route);
  }
  return res;
}

std::string grasp_graph_to_json(const Scene& scene, const PlannerConfig& cfg,
                                GraspCache& cache, const PosePath& path,
                                const BottomTierResult& result) {
  (void)scene;
  (void)cfg;
  (void)cache;
  nlohmann::ordered_json j;
  j["layers"] = result.gt_sizes;
  j["segments"] = result.gm_sizes;
  j["node_count"] = result.node_count;
  j["ok"] = result.ok;
  if (result.ok) {
    j["cost"] = result.plan.cost;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& g : result.plan.seg_grasp) arr.push_back(grasp_label(g));
    j["grasp_path"] = arr;
  } else {
    j["fail_segment"] = result.fail_segment;
    j["fail_reason"] = result.fail_reason;
  }
  auto moves = nlohmann::ordered_json::array();
  for (const auto& m : path.moves) moves.push_back(primitive_kind_name(m.kind));
  j["moves"] = moves;
  return j.dump(2) + "\n";
}

}  // namespace ldhp
