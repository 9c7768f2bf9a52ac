#include "cckit/geometry_io.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace cckit {

void write_file_atomic(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw Error("cannot open for writing: " + tmp);
    const std::size_t written = std::fwrite(payload.data(), 1, payload.size(), f);
    const int rc = std::fclose(f);
    if (written != payload.size() || rc != 0) {
      std::remove(tmp.c_str());
      throw Error("short write: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot move into place: " + path);
  }
}

void write_pgm(const SliceMask& mask, const std::string& path) {
  std::ostringstream os;
  os << "P5\n" << mask.resolution << " " << mask.resolution << "\n255\n";
  std::string payload = os.str();
  payload.reserve(payload.size() + mask.cells.size());
  for (std::uint8_t c : mask.cells) payload.push_back(c ? '\xff' : '\0');
  write_file_atomic(path, payload);
}

namespace {

// Integer endpoint key on the doubled grid so chaining is exact.
using Pt = std::pair<int, int>;

Complex to_zeta(const SliceMask& m, const Pt& p) {
  // Doubled coordinates: (2*ix, 2*iy) is the sample, odd values are midlines.
  return m.zeta(0, 0) + 0.5 * m.step() * Complex(p.first, p.second);
}

}  // namespace

std::vector<std::vector<Complex>> mask_contours(const SliceMask& mask) {
  const int n = mask.resolution;
  auto at = [&](int ix, int iy) {
    return ix >= 0 && ix < n && iy >= 0 && iy < n && mask.cell(ix, iy);
  };
  // Interface segments between a member cell and a non-member 4-neighbour,
  // drawn as unit segments of the midline lattice.
  std::multimap<Pt, std::pair<Pt, std::size_t>> adjacency;
  std::vector<std::pair<Pt, Pt>> segments;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (!at(ix, iy)) continue;
      const int cx = 2 * ix, cy = 2 * iy;
      struct Side {
        int dx, dy;        // neighbour offset
        Pt a, b;           // midline segment in doubled coordinates
      };
      const Side sides[4] = {
          {1, 0, {cx + 1, cy - 1}, {cx + 1, cy + 1}},
          {-1, 0, {cx - 1, cy - 1}, {cx - 1, cy + 1}},
          {0, 1, {cx - 1, cy + 1}, {cx + 1, cy + 1}},
          {0, -1, {cx - 1, cy - 1}, {cx + 1, cy - 1}},
      };
      for (const Side& s : sides) {
        if (at(ix + s.dx, iy + s.dy)) continue;
        const std::size_t id = segments.size();
        segments.emplace_back(s.a, s.b);
        adjacency.emplace(s.a, std::make_pair(s.b, id));
        adjacency.emplace(s.b, std::make_pair(s.a, id));
      }
    }
  }

  std::vector<bool> used(segments.size(), false);
  std::vector<std::vector<Complex>> loops;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    std::vector<Complex> loop;
    Pt cur = segments[start].first;
    Pt first = cur;
    loop.push_back(to_zeta(mask, cur));
    while (true) {
      auto range = adjacency.equal_range(cur);
      bool advanced = false;
      for (auto it = range.first; it != range.second; ++it) {
        if (used[it->second.second]) continue;
        used[it->second.second] = true;
        cur = it->second.first;
        loop.push_back(to_zeta(mask, cur));
        advanced = true;
        break;
      }
      if (!advanced) break;
      if (cur == first) break;
    }
    if (loop.size() > 2) loops.push_back(std::move(loop));
  }
  return loops;
}

void write_contours_svg(const SliceMask& mask,
                        const std::vector<std::vector<Complex>>& contours,
                        const std::string& path) {
  const double lo_x = mask.center.real() - mask.halfwidth;
  const double lo_y = mask.center.imag() - mask.halfwidth;
  std::ostringstream os;
  os.precision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo_x << " "
     << lo_y << " " << 2 * mask.halfwidth << " " << 2 * mask.halfwidth << "\">\n";
  for (const auto& loop : contours) {
    os << "  <path fill=\"none\" stroke=\"black\" stroke-width=\""
       << mask.step() * 0.25 << "\" d=\"";
    for (std::size_t i = 0; i < loop.size(); ++i)
      os << (i == 0 ? "M " : "L ") << loop[i].real() << " " << loop[i].imag() << " ";
    os << "Z\"/>\n";
  }
  os << "</svg>\n";
  write_file_atomic(path, os.str());
}

void write_polyline_csv(const std::vector<Complex>& polyline, const std::string& path) {
  std::ostringstream os;
  os.precision(12);
  os << "re,im\n";
  for (const Complex& p : polyline) os << p.real() << "," << p.imag() << "\n";
  write_file_atomic(path, os.str());
}

void write_field_csv(const std::vector<std::array<double, 3>>& rows,
                     const std::string& path) {
  std::ostringstream os;
  os.precision(12);
  os << "x,y,value\n";
  for (const auto& r : rows) os << r[0] << "," << r[1] << "," << r[2] << "\n";
  write_file_atomic(path, os.str());
}

}  // namespace cckit
