#include "morphkit/contour.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>

#include "morphkit/errors.hpp"

namespace morphkit {
namespace {

// Edge ids over the pixel-center grid. Horizontal edge (x,y)-(x+1,y) and
// vertical edge (x,y)-(x,y+1) get distinct ids; every marching-squares
// crossing point lives on exactly one such edge, which makes the chain
// structure explicit: an interior edge is shared by two cells and therefore
// touched by at most two segments.
int64_t hedge_id(int x, int y, int w) { return (static_cast<int64_t>(y) * w + x) * 2; }
int64_t vedge_id(int x, int y, int w) { return (static_cast<int64_t>(y) * w + x) * 2 + 1; }

struct ChainGraph {
  std::map<int64_t, Vec2> point;                  // edge id -> crossing point
  std::map<int64_t, std::array<int64_t, 2>> adj;  // edge id -> neighbor edges

  void add_segment(int64_t a, const Vec2& pa, int64_t b, const Vec2& pb) {
    point.emplace(a, pa);
    point.emplace(b, pb);
    link(a, b);
    link(b, a);
  }

 private:
  void link(int64_t from, int64_t to) {
    auto& slots = adj.try_emplace(from, std::array<int64_t, 2>{-1, -1}).first->second;
    if (slots[0] == -1)
      slots[0] = to;
    else if (slots[1] == -1)
      slots[1] = to;
    // A third segment on one edge cannot occur: each cell emits each of its
    // edges at most once and an edge belongs to at most two cells.
  }
};

}  // namespace

std::vector<std::vector<Vec2>> extract_all_closed_contours(
    const GrayImage& image, double threshold) {
  if (image.empty()) raise(ErrorCode::invalid_argument, "empty image");
  if (!(threshold > 0.0 && threshold < 1.0))
    raise(ErrorCode::invalid_argument, "threshold must be in (0,1)");

  const int w = image.width, h = image.height;
  double lo = image.pixels[0], hi = image.pixels[0];
  for (const double v : image.pixels) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-12)
    raise(ErrorCode::no_contour, "uniform image: nothing crosses the threshold");

  const double scale = 1.0 / (hi - lo);
  auto val = [&](int x, int y) { return (image.at(x, y) - lo) * scale; };
  auto frac = [&](double a, double b) { return (threshold - a) / (b - a); };

  ChainGraph graph;
  for (int cy = 0; cy + 1 < h; ++cy) {
    for (int cx = 0; cx + 1 < w; ++cx) {
      const double v00 = val(cx, cy), v10 = val(cx + 1, cy);
      const double v11 = val(cx + 1, cy + 1), v01 = val(cx, cy + 1);
      const int idx = (v00 >= threshold ? 1 : 0) | (v10 >= threshold ? 2 : 0) |
                      (v11 >= threshold ? 4 : 0) | (v01 >= threshold ? 8 : 0);
      if (idx == 0 || idx == 15) continue;

      // Crossing points on the four cell edges (T, R, B, L).
      const int64_t te = hedge_id(cx, cy, w);
      const int64_t re = vedge_id(cx + 1, cy, w);
      const int64_t be = hedge_id(cx, cy + 1, w);
      const int64_t le = vedge_id(cx, cy, w);
      const Vec2 tp{cx + frac(v00, v10), static_cast<double>(cy)};
      const Vec2 rp{static_cast<double>(cx + 1), cy + frac(v10, v11)};
      const Vec2 bp{cx + frac(v01, v11), static_cast<double>(cy + 1)};
      const Vec2 lp{static_cast<double>(cx), cy + frac(v00, v01)};

      auto seg = [&](int e1, int e2) {
        const int64_t ids[4] = {te, re, be, le};
        const Vec2 pts[4] = {tp, rp, bp, lp};
        graph.add_segment(ids[e1], pts[e1], ids[e2], pts[e2]);
      };
      enum { T = 0, R = 1, B = 2, L = 3 };

      switch (idx) {
        case 1: seg(L, T); break;
        case 2: seg(T, R); break;
        case 3: seg(L, R); break;
        case 4: seg(R, B); break;
        case 6: seg(T, B); break;
        case 7: seg(L, B); break;
        case 8: seg(B, L); break;
        case 9: seg(T, B); break;
        case 11: seg(R, B); break;
        case 12: seg(R, L); break;
        case 13: seg(T, R); break;
        case 14: seg(L, T); break;
        case 5: {  // saddle, disambiguated by the cell-center average
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          if (center >= threshold) { seg(T, R); seg(B, L); }
          else { seg(L, T); seg(R, B); }
          break;
        }
        case 10: {
          const double center = 0.25 * (v00 + v10 + v11 + v01);
          if (center >= threshold) { seg(L, T); seg(R, B); }
          else { seg(T, R); seg(B, L); }
          break;
        }
        default: break;
      }
    }
  }

  if (graph.adj.empty())
    raise(ErrorCode::no_contour, "no iso-contour at this threshold");

  std::vector<std::vector<Vec2>> loops;
  bool saw_open = false;
  std::map<int64_t, bool> visited;
  for (const auto& [start, slots] : graph.adj) {
    if (visited[start]) continue;
    if (slots[1] == -1) {  // chain endpoint: open contour
      visited[start] = true;
      saw_open = true;
      int64_t prev = start, cur = slots[0];
      while (cur != -1 && !visited[cur]) {
        visited[cur] = true;
        const auto& nb = graph.adj.at(cur);
        const int64_t next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
      }
      continue;
    }
    // Walk a closed loop.
    std::vector<Vec2> pts;
    int64_t prev = -1, cur = start;
    bool closed = false;
    while (true) {
      visited[cur] = true;
      pts.push_back(graph.point.at(cur));
      const auto& nb = graph.adj.at(cur);
      const int64_t next = nb[0] == prev ? nb[1] : nb[0];
      if (next == -1) { saw_open = true; break; }
      if (next == start) { closed = true; break; }
      if (visited[next]) break;  // should not happen on a well-formed graph
      prev = cur;
      cur = next;
    }
    if (closed && pts.size() >= 3) loops.push_back(std::move(pts));
  }

  if (loops.empty()) {
    if (saw_open)
      raise(ErrorCode::open_contour_only,
            "every contour touches the image border without closing");
    raise(ErrorCode::no_contour, "no closed contour at this threshold");
  }

  std::stable_sort(loops.begin(), loops.end(),
                   [](const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
                     return polygon_perimeter(a) > polygon_perimeter(b);
                   });
  return loops;
}

Outline extract_contour(const GrayImage& image, double threshold,
                        const std::string& source_id) {
  const auto loops = extract_all_closed_contours(image, threshold);
  for (const auto& loop : loops) {
    try {
      return make_outline(loop, source_id);
    } catch (const MorphError&) {
      // degenerate after dedup; try the next-longest loop
    }
  }
  raise(ErrorCode::no_contour, "all closed contours degenerate");
}

}  // namespace morphkit
