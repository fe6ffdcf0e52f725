// Constrained Delaunay triangulation of a rectangle with circular holes
// (inscribed polygons), refined Ruppert-style to a 20 degree angle bound and
// a graded size field. Incremental Lawson insertion with robust predicates.

#include "stl/mesh.hpp"
#include "stl/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace stl {

namespace {

constexpr double kMinAngleDeg = 20.0;
constexpr std::size_t kTriangleBudget = 2'000'000;

struct Tri {
  std::array<int, 3> v{-1, -1, -1};
  std::array<int, 3> adj{-1, -1, -1};  // adj[i] across edge opposite v[i]
  bool alive = false;
};

using VPair = std::pair<int, int>;

VPair ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

class Triangulator {
 public:
  Triangulator(const DomainSpec& domain, const std::vector<Hole>& holes,
               double h_far, int min_segments)
      : domain_(domain), holes_(holes), h_far_(h_far) {
    init_rectangle();
    insert_hole_rims(min_segments);
    refine();
  }

  Mesh extract();

 private:
  // --- basic helpers -------------------------------------------------------

  double orient(int a, int b, int c) const {
    const double pa[2] = {pts_[a].x, pts_[a].y};
    const double pb[2] = {pts_[b].x, pts_[b].y};
    const double pc[2] = {pts_[c].x, pts_[c].y};
    return orient2d(pa, pb, pc);
  }
  double orient_pt(int a, int b, const double* p) const {
    const double pa[2] = {pts_[a].x, pts_[a].y};
    const double pb[2] = {pts_[b].x, pts_[b].y};
    return orient2d(pa, pb, p);
  }
  double in_circle(int a, int b, int c, int d) const {
    const double pa[2] = {pts_[a].x, pts_[a].y};
    const double pb[2] = {pts_[b].x, pts_[b].y};
    const double pc[2] = {pts_[c].x, pts_[c].y};
    const double pd[2] = {pts_[d].x, pts_[d].y};
    return incircle(pa, pb, pc, pd);
  }

  int local_index(int t, int v) const {
    for (int i = 0; i < 3; ++i)
      if (tris_[t].v[i] == v) return i;
    throw std::logic_error("local_index: vertex not in triangle");
  }

  void set_tri(int t, int a, int b, int c, int na, int nb, int nc) {
    tris_[t].v = {a, b, c};
    tris_[t].adj = {na, nb, nc};
    tris_[t].alive = true;
    v2t_[a] = t;
    v2t_[b] = t;
    v2t_[c] = t;
    dirty_tris_.push_back(t);
  }

  int new_tri_slot() {
    tris_.push_back({});
    if (tris_.size() > kTriangleBudget)
      throw std::runtime_error(
          "mesh_perforated: triangle budget exceeded (h_far=" +
          std::to_string(h_far_) + ", holes=" + std::to_string(holes_.size()) +
          ")");
    return static_cast<int>(tris_.size() - 1);
  }

  // Redirect neighbor n's adjacency pointer from old_t to new_t.
  void repoint(int n, int old_t, int new_t) {
    if (n < 0) return;
    for (int i = 0; i < 3; ++i)
      if (tris_[n].adj[i] == old_t) {
        tris_[n].adj[i] = new_t;
        return;
      }
    throw std::logic_error("repoint: stale adjacency");
  }

  bool is_constrained(int a, int b) const {
    return segments_.count(ordered(a, b)) != 0;
  }

  int add_point(double x, double y) {
    pts_.push_back({x, y});
    v2t_.push_back(-1);
    return static_cast<int>(pts_.size() - 1);
  }

  // --- initialization ------------------------------------------------------

  void init_rectangle() {
    add_point(domain_.xmin, domain_.ymin);
    add_point(domain_.xmax, domain_.ymin);
    add_point(domain_.xmax, domain_.ymax);
    add_point(domain_.xmin, domain_.ymax);
    tris_.resize(2);
    set_tri(0, 0, 1, 2, -1, 1, -1);
    set_tri(1, 0, 2, 3, -1, -1, 0);
    const BoundaryTag outer{BoundaryTag::Kind::Outer, -1};
    segments_[ordered(0, 1)] = outer;
    segments_[ordered(1, 2)] = outer;
    segments_[ordered(2, 3)] = outer;
    segments_[ordered(3, 0)] = outer;
  }

  void insert_hole_rims(int min_segments) {
    rim_polygons_.resize(holes_.size());
    for (std::size_t k = 0; k < holes_.size(); ++k) {
      const Hole& h = holes_[k];
      const double h_near = h.radius / 2.0;
      const int n = std::max(
          min_segments,
          static_cast<int>(std::ceil(2.0 * std::numbers::pi * h.radius / h_near)));
      std::vector<int> ring(n);
      for (int j = 0; j < n; ++j) {
        const double th = 2.0 * std::numbers::pi * j / n;
        const double x = h.cx + h.radius * std::cos(th);
        const double y = h.cy + h.radius * std::sin(th);
        ring[j] = insert_free_point(x, y, -1);
        if (ring[j] < 0)
          throw std::runtime_error("mesh_perforated: failed to insert rim vertex");
        rim_polygons_[k].push_back(ring[j]);
      }
      const BoundaryTag tag{BoundaryTag::Kind::Hole, static_cast<int>(k)};
      for (int j = 0; j < n; ++j)
        insert_segment(ring[j], ring[(j + 1) % n], tag);
    }
  }

  // --- point location ------------------------------------------------------

  struct Location {
    int tri = -1;
    int on_edge = -1;    // local index of opposite vertex, or -1
    int on_vertex = -1;  // vertex id when p coincides, or -1
  };

  Location locate(const double* p, int hint) const {
    int t = hint;
    if (t < 0 || !tris_[t].alive) {
      for (std::size_t k = 0; k < tris_.size(); ++k)
        if (tris_[k].alive) {
          t = static_cast<int>(k);
          break;
        }
    }
    const std::size_t max_steps = 4 * tris_.size() + 64;
    for (std::size_t step = 0; step < max_steps; ++step) {
      int cross = -1;
      for (int e = 0; e < 3; ++e) {
        if (orient_pt(tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], p) < 0.0) {
          cross = e;
          break;
        }
      }
      if (cross < 0) return classify_inside(t, p);
      const int next = tris_[t].adj[cross];
      if (next < 0) break;  // left the hull; exhaustive fallback below
      t = next;
    }
    for (std::size_t k = 0; k < tris_.size(); ++k) {
      if (!tris_[k].alive) continue;
      bool inside = true;
      for (int e = 0; e < 3; ++e)
        if (orient_pt(tris_[k].v[(e + 1) % 3], tris_[k].v[(e + 2) % 3], p) < 0.0)
          inside = false;
      if (inside) return classify_inside(static_cast<int>(k), p);
    }
    return {};
  }

  Location classify_inside(int t, const double* p) const {
    int zero_edge = -1, zeros = 0;
    for (int e = 0; e < 3; ++e) {
      if (orient_pt(tris_[t].v[(e + 1) % 3], tris_[t].v[(e + 2) % 3], p) == 0.0) {
        zero_edge = e;
        ++zeros;
      }
    }
    if (zeros >= 2) {
      // On a vertex: the one shared by the two zero edges.
      for (int i = 0; i < 3; ++i) {
        const Point2& q = pts_[tris_[t].v[i]];
        if (q.x == p[0] && q.y == p[1]) return {t, -1, tris_[t].v[i]};
      }
      // Degenerate but not a vertex; treat as on the first zero edge.
      zeros = 1;
    }
    if (zeros == 1) return {t, zero_edge, -1};
    return {t, -1, -1};
  }

  // --- insertion and legalization -----------------------------------------

  // Stack entries are (triangle slot, inserted vertex); the local index is
  // re-resolved on pop because flips rewrite slots.
  void legalize_from(std::vector<std::pair<int, int>>& stack) {
    while (!stack.empty()) {
      auto [t, p] = stack.back();
      stack.pop_back();
      int i = -1;
      for (int j = 0; j < 3; ++j)
        if (tris_[t].v[j] == p) i = j;
      if (i < 0) continue;  // slot no longer carries p
      const int u = tris_[t].v[(i + 1) % 3];
      const int v = tris_[t].v[(i + 2) % 3];
      const int o = tris_[t].adj[i];
      if (o < 0 || is_constrained(u, v)) continue;
      int d = -1;
      for (int j = 0; j < 3; ++j)
        if (tris_[o].v[j] != u && tris_[o].v[j] != v) d = tris_[o].v[j];
      if (in_circle(tris_[t].v[0], tris_[t].v[1], tris_[t].v[2], d) > 0.0) {
        flip(t, i);
        stack.push_back({t, p});
        stack.push_back({o, p});
      }
    }
  }

  // Flip the edge opposite local vertex i of triangle t with its neighbor.
  // Slot t keeps (p,u,d), slot o becomes (p,d,v).
  void flip(int t, int i) {
    const int o = tris_[t].adj[i];
    const int p = tris_[t].v[i];
    const int u = tris_[t].v[(i + 1) % 3];
    const int v = tris_[t].v[(i + 2) % 3];
    const int jd = [&] {
      for (int j = 0; j < 3; ++j)
        if (tris_[o].v[j] != u && tris_[o].v[j] != v) return j;
      throw std::logic_error("flip: neighbor does not share edge");
    }();
    const int d = tris_[o].v[jd];
    const int B = tris_[t].adj[(i + 2) % 3];  // across (p,u)
    const int A = tris_[t].adj[(i + 1) % 3];  // across (v,p)
    const int C = tris_[o].adj[local_index(o, v)];  // across (u,d)
    const int D = tris_[o].adj[local_index(o, u)];  // across (d,v)
    set_tri(t, p, u, d, C, o, B);
    set_tri(o, p, d, v, D, A, t);
    repoint(C, o, t);
    repoint(A, t, o);
  }

  // Split triangle t at interior point index pv (1 -> 3).
  void split_interior(int t, int pv,
                      std::vector<std::pair<int, int>>& suspects) {
    const int a = tris_[t].v[0], b = tris_[t].v[1], c = tris_[t].v[2];
    const int Aa = tris_[t].adj[0], Ab = tris_[t].adj[1], Ac = tris_[t].adj[2];
    const int t_bc = new_tri_slot();
    const int t_ca = new_tri_slot();
    set_tri(t, a, b, pv, t_bc, t_ca, Ac);       // (a,b,p)
    set_tri(t_bc, b, c, pv, t_ca, t, Aa);       // (b,c,p)
    set_tri(t_ca, c, a, pv, t, t_bc, Ab);       // (c,a,p)
    repoint(Aa, t, t_bc);
    repoint(Ab, t, t_ca);
    suspects.push_back({t, pv});
    suspects.push_back({t_bc, pv});
    suspects.push_back({t_ca, pv});
  }

  // Split edge opposite local vertex e of triangle t at point index pv
  // (point lies on that edge). Handles hull edges.
  void split_on_edge(int t, int e, int pv,
                     std::vector<std::pair<int, int>>& suspects) {
    const int a = tris_[t].v[e];
    const int b = tris_[t].v[(e + 1) % 3];
    const int c = tris_[t].v[(e + 2) % 3];
    const int u = tris_[t].adj[e];
    const int Nb = tris_[t].adj[(e + 1) % 3];  // across (c,a)
    const int Nc = tris_[t].adj[(e + 2) % 3];  // across (a,b)

    const int t2 = new_tri_slot();
    int u1 = -1, u2 = -1, d = -1, Mb = -1, Mc = -1;
    if (u >= 0) {
      const int jd = [&] {
        for (int j = 0; j < 3; ++j)
          if (tris_[u].v[j] != b && tris_[u].v[j] != c) return j;
        throw std::logic_error("split_on_edge: bad neighbor");
      }();
      d = tris_[u].v[jd];
      Mb = tris_[u].adj[local_index(u, b)];  // across (d,c)
      Mc = tris_[u].adj[local_index(u, c)];  // across (b,d)
      u1 = u;
      u2 = new_tri_slot();
    }
    // t1 = (a,b,p) in slot t; t2 = (a,p,c)
    set_tri(t, a, b, pv, (u >= 0) ? u2 : -1, t2, Nc);
    set_tri(t2, a, pv, c, u1, Nb, t);
    repoint(Nb, t, t2);
    suspects.push_back({t, pv});
    suspects.push_back({t2, pv});
    if (u >= 0) {
      // u1 = (d,c,p), u2 = (d,p,b)
      set_tri(u1, d, c, pv, t2, u2, Mb);
      set_tri(u2, d, pv, b, t, Mc, u1);
      repoint(Mc, u, u2);
      suspects.push_back({u1, pv});
      suspects.push_back({u2, pv});
    }
  }

  // Insert a free point; returns the vertex index, the existing vertex for
  // duplicates, or -1 when the point lands on a constrained edge.
  int insert_free_point(double x, double y, int hint) {
    const double p[2] = {x, y};
    const Location loc = locate(p, hint);
    if (loc.tri < 0) return -1;
    if (loc.on_vertex >= 0) return loc.on_vertex;
    if (loc.on_edge >= 0) {
      const int a = tris_[loc.tri].v[(loc.on_edge + 1) % 3];
      const int b = tris_[loc.tri].v[(loc.on_edge + 2) % 3];
      if (is_constrained(a, b)) return -1;
      const int pv = add_point(x, y);
      std::vector<std::pair<int, int>> suspects;
      split_on_edge(loc.tri, loc.on_edge, pv, suspects);
      legalize_from(suspects);
      after_vertex_insert(pv);
      return pv;
    }
    const int pv = add_point(x, y);
    std::vector<std::pair<int, int>> suspects;
    split_interior(loc.tri, pv, suspects);
    legalize_from(suspects);
    after_vertex_insert(pv);
    return pv;
  }

  // --- constrained edges ---------------------------------------------------

  // All alive triangles incident to vertex a, deterministic order.
  std::vector<int> triangles_around(int a) const {
    std::vector<int> out;
    const int start = v2t_[a];
    if (start < 0 || !tris_[start].alive) {
      for (std::size_t k = 0; k < tris_.size(); ++k)
        if (tris_[k].alive)
          for (int i = 0; i < 3; ++i)
            if (tris_[k].v[i] == a) out.push_back(static_cast<int>(k));
      return out;
    }
    // rotate one way, then the other
    auto rotate = [&](int dir) {
      int t = start;
      while (t >= 0) {
        if (dir > 0 || t != start) {
          if (std::find(out.begin(), out.end(), t) != out.end()) break;
          out.push_back(t);
        }
        const int ia = local_index(t, a);
        t = tris_[t].adj[(dir > 0) ? (ia + 1) % 3 : (ia + 2) % 3];
      }
    };
    rotate(+1);
    rotate(-1);
    return out;
  }

  bool edge_exists(int a, int b) const {
    for (int t : triangles_around(a))
      for (int i = 0; i < 3; ++i)
        if (tris_[t].v[i] == b) return true;
    return false;
  }

  bool properly_crosses(int u, int v, int a, int b) const {
    const double o1 = orient(a, b, u), o2 = orient(a, b, v);
    if (o1 * o2 >= 0.0) return false;
    const double o3 = orient(u, v, a), o4 = orient(u, v, b);
    return o3 * o4 < 0.0;
  }

  void insert_segment(int a, int b, const BoundaryTag& tag) {
    if (edge_exists(a, b)) {
      segments_[ordered(a, b)] = tag;
      seg_queue_.push_back(ordered(a, b));
      return;
    }
    // A vertex exactly on the open segment splits the recovery in two.
    for (int w = 0; w < static_cast<int>(pts_.size()); ++w) {
      if (w == a || w == b) continue;
      if (orient(a, b, w) == 0.0) {
        const double t1 =
            (pts_[w].x - pts_[a].x) * (pts_[b].x - pts_[a].x) +
            (pts_[w].y - pts_[a].y) * (pts_[b].y - pts_[a].y);
        const double len2 = (pts_[b].x - pts_[a].x) * (pts_[b].x - pts_[a].x) +
                            (pts_[b].y - pts_[a].y) * (pts_[b].y - pts_[a].y);
        if (t1 > 0.0 && t1 < len2) {
          insert_segment(a, w, tag);
          insert_segment(w, b, tag);
          return;
        }
      }
    }
    // Flip-based recovery of the crossing pipe (Sloan).
    std::deque<VPair> crossing;
    for (int t : triangles_around(a)) {
      const int ia = local_index(t, a);
      const int u = tris_[t].v[(ia + 1) % 3];
      const int v = tris_[t].v[(ia + 2) % 3];
      if (properly_crosses(u, v, a, b)) crossing.push_back(ordered(u, v));
    }
    if (crossing.empty())
      throw std::runtime_error("insert_segment: cannot start recovery");
    // Collect the rest of the pipe by walking.
    {
      VPair cur = crossing.front();
      int t = find_edge_triangle(cur.first, cur.second, a, b);
      while (true) {
        // t is the triangle on the far side of cur relative to a
        bool found = false;
        for (int e = 0; e < 3; ++e) {
          const int u = tris_[t].v[(e + 1) % 3];
          const int v = tris_[t].v[(e + 2) % 3];
          if (ordered(u, v) == cur) continue;
          if (u == b || v == b) continue;
          if (properly_crosses(u, v, a, b)) {
            crossing.push_back(ordered(u, v));
            cur = ordered(u, v);
            t = tris_[t].adj[e];
            found = true;
            break;
          }
        }
        if (!found) break;
      }
    }
    std::size_t guard = 0;
    const std::size_t guard_max = 100 * (crossing.size() + 4) * (crossing.size() + 4);
    while (!crossing.empty()) {
      if (++guard > guard_max)
        throw std::runtime_error("insert_segment: edge recovery did not terminate");
      const VPair uv = crossing.front();
      crossing.pop_front();
      const auto [t, i] = find_flippable(uv);
      if (t < 0) continue;  // edge vanished via an earlier flip
      // Flip only strictly convex quads.
      const int u = tris_[t].v[(i + 1) % 3];
      const int v = tris_[t].v[(i + 2) % 3];
      const int p = tris_[t].v[i];
      const int o = tris_[t].adj[i];
      int d = -1;
      for (int j = 0; j < 3; ++j)
        if (tris_[o].v[j] != u && tris_[o].v[j] != v) d = tris_[o].v[j];
      if (!(orient(p, u, d) > 0.0 && orient(p, d, v) > 0.0)) {
        crossing.push_back(uv);
        continue;
      }
      flip(t, i);
      if (properly_crosses(p, d, a, b)) crossing.push_back(ordered(p, d));
    }
    if (!edge_exists(a, b))
      throw std::runtime_error("insert_segment: recovery failed");
    segments_[ordered(a, b)] = tag;
    seg_queue_.push_back(ordered(a, b));
  }

  // Triangle adjacent to edge (u,v) on the opposite side of point a.
  int find_edge_triangle(int u, int v, int a, int /*b*/) const {
    for (int t : triangles_around(u))
      for (int i = 0; i < 3; ++i) {
        const int eu = tris_[t].v[(i + 1) % 3];
        const int ev = tris_[t].v[(i + 2) % 3];
        if (ordered(eu, ev) == ordered(u, v)) {
          // the triangle NOT containing a is on the far side
          bool has_a = false;
          for (int j = 0; j < 3; ++j)
            if (tris_[t].v[j] == a) has_a = true;
          if (!has_a) return t;
          return tris_[t].adj[i];
        }
      }
    return -1;
  }

  // (triangle, local index) such that the edge opposite that vertex is uv.
  std::pair<int, int> find_flippable(const VPair& uv) const {
    for (int t : triangles_around(uv.first))
      for (int i = 0; i < 3; ++i) {
        const int u = tris_[t].v[(i + 1) % 3];
        const int v = tris_[t].v[(i + 2) % 3];
        if (ordered(u, v) == uv && tris_[t].adj[i] >= 0) return {t, i};
      }
    return {-1, -1};
  }

  // --- refinement ----------------------------------------------------------

  double size_at(double x, double y) const {
    double s = h_far_;
    for (const Hole& h : holes_) {
      const double d = std::fabs(std::hypot(x - h.cx, y - h.cy) - h.radius);
      s = std::min(s, h.radius / 2.0 + d);
    }
    return s;
  }

  bool centroid_in_hole(int t, int* which = nullptr) const {
    const Point2& a = pts_[tris_[t].v[0]];
    const Point2& b = pts_[tris_[t].v[1]];
    const Point2& c = pts_[tris_[t].v[2]];
    const double cx = (a.x + b.x + c.x) / 3.0;
    const double cy = (a.y + b.y + c.y) / 3.0;
    return point_in_hole_polygon(cx, cy, which);
  }

  bool point_in_hole_polygon(double x, double y, int* which = nullptr) const {
    const double p[2] = {x, y};
    for (std::size_t k = 0; k < holes_.size(); ++k) {
      const Hole& h = holes_[k];
      const double dx = x - h.cx, dy = y - h.cy;
      if (dx * dx + dy * dy > h.radius * h.radius) continue;
      bool inside = true;
      const auto& ring = rim_polygons_[k];
      const int n = static_cast<int>(ring.size());
      for (int j = 0; j < n && inside; ++j) {
        if (orient_pt(ring[j], ring[(j + 1) % n], p) <= 0.0) inside = false;
      }
      if (inside) {
        if (which) *which = static_cast<int>(k);
        return true;
      }
    }
    return false;
  }

  bool triangle_is_bad(int t) const {
    if (!tris_[t].alive) return false;
    if (centroid_in_hole(t)) return false;
    const Point2& a = pts_[tris_[t].v[0]];
    const Point2& b = pts_[tris_[t].v[1]];
    const Point2& c = pts_[tris_[t].v[2]];
    const double la = std::hypot(c.x - b.x, c.y - b.y);
    const double lb = std::hypot(a.x - c.x, a.y - c.y);
    const double lc = std::hypot(b.x - a.x, b.y - a.y);
    const double lmax = std::max({la, lb, lc});
    const double cx = (a.x + b.x + c.x) / 3.0;
    const double cy = (a.y + b.y + c.y) / 3.0;
    if (lmax > size_at(cx, cy)) return true;
    // min angle via the circumradius-to-shortest-edge ratio is equivalent,
    // but the direct law-of-cosines check reads better.
    auto angle_cos = [](double opp, double s1, double s2) {
      return (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
    };
    const double cos_bound = std::cos(kMinAngleDeg * std::numbers::pi / 180.0);
    if (angle_cos(la, lb, lc) > cos_bound) return true;
    if (angle_cos(lb, lc, la) > cos_bound) return true;
    if (angle_cos(lc, la, lb) > cos_bound) return true;
    return false;
  }

  bool segment_encroached_by(const VPair& s, double x, double y) const {
    const Point2& a = pts_[s.first];
    const Point2& b = pts_[s.second];
    return (a.x - x) * (b.x - x) + (a.y - y) * (b.y - y) < 0.0;
  }

  bool segment_encroached(const VPair& s) const {
    // Practical test: apexes of the adjacent triangles.
    for (int t : triangles_around(s.first))
      for (int i = 0; i < 3; ++i) {
        const int u = tris_[t].v[(i + 1) % 3];
        const int v = tris_[t].v[(i + 2) % 3];
        if (ordered(u, v) == s) {
          const Point2& apex = pts_[tris_[t].v[i]];
          if (segment_encroached_by(s, apex.x, apex.y)) return true;
        }
      }
    return false;
  }

  void split_segment(const VPair& s) {
    const auto it = segments_.find(s);
    if (it == segments_.end()) return;
    const BoundaryTag tag = it->second;
    // Locate the adjacent triangle pair by circulating.
    int t = -1, e = -1;
    for (int cand : triangles_around(s.first)) {
      for (int i = 0; i < 3; ++i) {
        const int u = tris_[cand].v[(i + 1) % 3];
        const int v = tris_[cand].v[(i + 2) % 3];
        if (ordered(u, v) == s) {
          t = cand;
          e = i;
          break;
        }
      }
      if (t >= 0) break;
    }
    if (t < 0) throw std::logic_error("split_segment: segment edge not found");
    const Point2& pa = pts_[s.first];
    const Point2& pb = pts_[s.second];
    const int pv = add_point(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y));
    segments_.erase(it);
    std::vector<std::pair<int, int>> suspects;
    split_on_edge(t, e, pv, suspects);
    legalize_from(suspects);
    segments_[ordered(s.first, pv)] = tag;
    segments_[ordered(pv, s.second)] = tag;
    seg_queue_.push_back(ordered(s.first, pv));
    seg_queue_.push_back(ordered(pv, s.second));
    // Keep the hole polygon ring consistent: the midpoint subdivides a chord,
    // staying on the polygon boundary, so the ring needs no update for the
    // inside test (the original chords still bound the region).
    after_vertex_insert(pv);
  }

  // Newly inserted vertices may encroach existing segments.
  void after_vertex_insert(int pv) {
    const Point2& p = pts_[pv];
    for (const auto& [seg, tag] : segments_) {
      (void)tag;
      if (seg.first == pv || seg.second == pv) continue;
      if (segment_encroached_by(seg, p.x, p.y)) seg_queue_.push_back(seg);
    }
  }

  struct Circumcenter {
    double x = 0.0, y = 0.0;
    bool ok = false;
  };

  Circumcenter circumcenter(int t) const {
    const Point2& a = pts_[tris_[t].v[0]];
    const Point2& b = pts_[tris_[t].v[1]];
    const Point2& c = pts_[tris_[t].v[2]];
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    if (d == 0.0) return {};
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return {a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d, true};
  }

  void refine() {
    for (const auto& [seg, tag] : segments_) {
      (void)tag;
      seg_queue_.push_back(seg);
    }
    for (std::size_t t = 0; t < tris_.size(); ++t)
      if (tris_[t].alive) dirty_tris_.push_back(static_cast<int>(t));

    std::set<std::array<int, 3>> given_up;
    std::size_t iterations = 0;
    while (!seg_queue_.empty() || !dirty_tris_.empty()) {
      if (++iterations > 50 * kTriangleBudget)
        throw std::runtime_error("mesh_perforated: refinement did not settle");
      if (!seg_queue_.empty()) {
        const VPair s = seg_queue_.front();
        seg_queue_.pop_front();
        if (segments_.count(s) && segment_encroached(s)) split_segment(s);
        continue;
      }
      const int t = dirty_tris_.front();
      dirty_tris_.pop_front();
      if (!tris_[t].alive || !triangle_is_bad(t)) continue;
      std::array<int, 3> key = tris_[t].v;
      std::sort(key.begin(), key.end());
      if (given_up.count(key)) continue;

      const Circumcenter cc = circumcenter(t);
      if (!cc.ok) continue;
      // Segments encroached by the proposed circumcenter get split instead.
      std::vector<VPair> encroached;
      for (const auto& [seg, tag] : segments_) {
        (void)tag;
        if (segment_encroached_by(seg, cc.x, cc.y)) encroached.push_back(seg);
      }
      if (!encroached.empty()) {
        for (const VPair& s : encroached) split_segment(s);
        dirty_tris_.push_back(t);
        continue;
      }
      const bool outside = cc.x <= domain_.xmin || cc.x >= domain_.xmax ||
                           cc.y <= domain_.ymin || cc.y >= domain_.ymax ||
                           point_in_hole_polygon(cc.x, cc.y);
      if (outside) {
        given_up.insert(key);
        continue;
      }
      if (insert_free_point(cc.x, cc.y, t) < 0) given_up.insert(key);
    }
  }

  // --- extraction ----------------------------------------------------------

  DomainSpec domain_;
  std::vector<Hole> holes_;
  double h_far_;

  std::vector<Point2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> v2t_;
  std::map<VPair, BoundaryTag> segments_;
  std::vector<std::vector<int>> rim_polygons_;  // original rim rings, CCW

  std::deque<VPair> seg_queue_;
  std::deque<int> dirty_tris_;

  friend Mesh mesh_perforated_impl(const DomainSpec&, const std::vector<Hole>&,
                                   double, int);
};

Mesh Triangulator::extract() {
  Mesh m;
  m.domain = domain_;
  m.holes = holes_;
  m.h = h_far_;

  std::vector<char> keep(tris_.size(), 0);
  for (std::size_t t = 0; t < tris_.size(); ++t)
    if (tris_[t].alive && !centroid_in_hole(static_cast<int>(t))) keep[t] = 1;

  std::vector<int> vmap(pts_.size(), -1);
  std::vector<std::array<int, 3>> out_tris;
  for (std::size_t t = 0; t < tris_.size(); ++t) {
    if (!keep[t]) continue;
    std::array<int, 3> tv = tris_[t].v;
    for (int i = 0; i < 3; ++i) {
      if (vmap[tv[i]] < 0) {
        vmap[tv[i]] = static_cast<int>(m.vertices.size());
        m.vertices.push_back(pts_[tv[i]]);
      }
      tv[i] = vmap[tv[i]];
    }
    // rotate the smallest index first, preserving orientation
    int rot = 0;
    for (int i = 1; i < 3; ++i)
      if (tv[i] < tv[rot]) rot = i;
    out_tris.push_back({tv[rot], tv[(rot + 1) % 3], tv[(rot + 2) % 3]});
  }
  std::sort(out_tris.begin(), out_tris.end());
  m.triangles = std::move(out_tris);

  // orient each boundary edge with the kept region on its left
  std::set<std::pair<int, int>> directed;
  for (const auto& tri : m.triangles)
    for (int i = 0; i < 3; ++i)
      directed.insert({tri[i], tri[(i + 1) % 3]});
  for (const auto& [seg, tag] : segments_) {
    BoundaryEdge e;
    e.a = vmap[seg.first];
    e.b = vmap[seg.second];
    e.tag = tag;
    if (e.a < 0 || e.b < 0)
      throw std::logic_error("extract: boundary vertex dropped");
    const bool fwd = directed.count({e.a, e.b}) != 0;
    const bool bwd = directed.count({e.b, e.a}) != 0;
    if (fwd == bwd) throw std::logic_error("extract: segment not on boundary");
    if (bwd) std::swap(e.a, e.b);
    m.boundary_edges.push_back(e);
  }
  std::sort(m.boundary_edges.begin(), m.boundary_edges.end(),
            [](const BoundaryEdge& x, const BoundaryEdge& y) {
              return std::tie(x.a, x.b) < std::tie(y.a, y.b);
            });
  return m;
}

}  // namespace

Mesh mesh_perforated(const DomainSpec& domain, const std::vector<Hole>& holes,
                     double h_far, int min_segments) {
  domain.validate();
  if (!(h_far > 0.0))
    throw std::invalid_argument("mesh_perforated: h_far must be > 0");
  if (min_segments < 3)
    throw std::invalid_argument("mesh_perforated: min_segments must be >= 3");
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Hole& h = holes[i];
    if (!(h.radius > 0.0))
      throw std::invalid_argument("mesh_perforated: hole radius must be > 0");
    const double margin =
        std::min({h.cx - domain.xmin, domain.xmax - h.cx, h.cy - domain.ymin,
                  domain.ymax - h.cy});
    if (margin <= h.radius)
      throw std::invalid_argument(
          "mesh_perforated: hole touches or crosses the rectangle boundary");
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      const double dist = std::hypot(holes[j].cx - h.cx, holes[j].cy - h.cy);
      if (dist <= h.radius + holes[j].radius)
        throw std::invalid_argument("mesh_perforated: overlapping holes");
    }
  }
  Triangulator tri(domain, holes, h_far, min_segments);
  return tri.extract();
}

}  // namespace stl
