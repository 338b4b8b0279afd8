#include "qzone/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

namespace qzone {

namespace {

void check_size(const TrafficInstance& inst, std::size_t size, const char* what) {
  if (size != inst.num_zones()) {
    throw ValidationError(std::string(what) + " has " + std::to_string(size) +
                          " entries but the instance has " + std::to_string(inst.num_zones()) +
                          " zones");
  }
  if (inst.num_zones() == 0) throw ValidationError("instance has no zones");
}

struct Cell {
  std::size_t row;
  std::size_t col;
};

Cell cell_of(const TrafficInstance& inst, Index zone) { return {zone / inst.cols, zone % inst.cols}; }

struct Segment {
  double x1, y1, x2, y2;
};

// Border shared by two grid-adjacent zones, in cell units.
std::optional<Segment> shared_border(const TrafficInstance& inst, const Edge& e) {
  const Cell a = cell_of(inst, e.i);
  const Cell b = cell_of(inst, e.j);
  if (a.row == b.row && b.col == a.col + 1) {
    const double x = static_cast<double>(b.col);
    return Segment{x, static_cast<double>(a.row), x, static_cast<double>(a.row + 1)};
  }
  if (a.col == b.col && b.row == a.row + 1) {
    const double y = static_cast<double>(b.row);
    return Segment{static_cast<double>(a.col), y, static_cast<double>(a.col + 1), y};
  }
  return std::nullopt;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Raster {
 public:
  Raster(std::size_t width, std::size_t height) : width_(width), height_(height), pixels_(width * height * 3, 255) {}

  void fill(std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1, Rgb c) {
    x1 = std::min(x1, width_);
    y1 = std::min(y1, height_);
    for (std::size_t y = y0; y < y1; ++y) {
      for (std::size_t x = x0; x < x1; ++x) {
        auto* p = &pixels_[(y * width_ + x) * 3];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
      }
    }
  }

  void line(double x1, double y1, double x2, double y2, Rgb c) {
    const double len = std::max(std::abs(x2 - x1), std::abs(y2 - y1));
    const auto steps = static_cast<std::size_t>(std::ceil(len)) + 1;
    for (std::size_t s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(steps);
      const auto x = static_cast<long>(std::lround(x1 + t * (x2 - x1)));
      const auto y = static_cast<long>(std::lround(y1 + t * (y2 - y1)));
      for (long dy = -1; dy <= 0; ++dy) {
        for (long dx = -1; dx <= 0; ++dx) {
          const long px = x + dx;
          const long py = y + dy;
          if (px >= 0 && py >= 0 && static_cast<std::size_t>(px) < width_ &&
              static_cast<std::size_t>(py) < height_) {
            fill(static_cast<std::size_t>(px), static_cast<std::size_t>(py),
                 static_cast<std::size_t>(px) + 1, static_cast<std::size_t>(py) + 1, c);
          }
        }
      }
    }
  }

  std::string ppm() const {
    std::string out = "P6\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
    out.append(pixels_.begin(), pixels_.end());
    return out;
  }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<unsigned char> pixels_;
};

Rgb gray_for(double value, double peak) {
  const double level = peak > 0.0 ? std::abs(value) / peak : 0.0;
  const auto g = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - level)));
  return {g, g, g};
}

double peak_of(std::span<const double> values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  return peak;
}

std::string svg_header(std::size_t width, std::size_t height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
}

}  // namespace

std::string Rgb::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

ImageFormat parse_image_format(const std::string& name) {
  if (name == "svg") return ImageFormat::svg;
  if (name == "ppm") return ImageFormat::ppm;
  throw ValidationError("unknown image format '" + name + "' (expected svg or ppm)");
}

std::string render_partition_svg(const TrafficInstance& inst, std::span<const std::uint8_t> x,
                                 const RenderSpec& spec) {
  check_size(inst, x.size(), "assignment");
  if (spec.cell_size == 0) throw ValidationError("cell size must be at least 1");
  const double s = static_cast<double>(spec.cell_size);
  std::string out = svg_header(inst.cols * spec.cell_size, inst.rows * spec.cell_size);
  out += "<g class=\"zones\">\n";
  for (Index z = 0; z < x.size(); ++z) {
    const Cell c = cell_of(inst, z);
    out += "<rect class=\"zone region-" + std::string(x[z] ? "a" : "b") + "\" x=\"" +
           fmt(static_cast<double>(c.col) * s) + "\" y=\"" + fmt(static_cast<double>(c.row) * s) +
           "\" width=\"" + fmt(s) + "\" height=\"" + fmt(s) + "\" fill=\"" +
           (x[z] ? spec.region_a : spec.region_b).hex() + "\"/>\n";
  }
  out += "</g>\n";
  if (spec.show_boundary) {
    out += "<g class=\"boundary\" stroke=\"" + spec.boundary.hex() + "\" stroke-width=\"" +
           fmt(std::max(1.0, s / 8.0)) + "\" stroke-linecap=\"square\">\n";
    for (const Edge& e : inst.edges) {
      if (x[e.i] == x[e.j]) continue;
      Segment seg;
      if (auto border = shared_border(inst, e)) {
        seg = *border;
      } else {
        const Cell a = cell_of(inst, e.i);
        const Cell b = cell_of(inst, e.j);
        seg = {a.col + 0.5, a.row + 0.5, b.col + 0.5, b.row + 0.5};
      }
      out += "<line class=\"cut\" x1=\"" + fmt(seg.x1 * s) + "\" y1=\"" + fmt(seg.y1 * s) +
             "\" x2=\"" + fmt(seg.x2 * s) + "\" y2=\"" + fmt(seg.y2 * s) + "\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_partition_ppm(const TrafficInstance& inst, std::span<const std::uint8_t> x,
                                 const RenderSpec& spec) {
  check_size(inst, x.size(), "assignment");
  if (spec.cell_size == 0) throw ValidationError("cell size must be at least 1");
  const std::size_t s = spec.cell_size;
  Raster raster(inst.cols * s, inst.rows * s);
  for (Index z = 0; z < x.size(); ++z) {
    const Cell c = cell_of(inst, z);
    raster.fill(c.col * s, c.row * s, (c.col + 1) * s, (c.row + 1) * s,
                x[z] ? spec.region_a : spec.region_b);
  }
  if (spec.show_boundary) {
    const double sd = static_cast<double>(s);
    for (const Edge& e : inst.edges) {
      if (x[e.i] == x[e.j]) continue;
      if (auto seg = shared_border(inst, e)) {
        raster.line(seg->x1 * sd, seg->y1 * sd, seg->x2 * sd, seg->y2 * sd, spec.boundary);
      } else {
        const Cell a = cell_of(inst, e.i);
        const Cell b = cell_of(inst, e.j);
        raster.line((a.col + 0.5) * sd, (a.row + 0.5) * sd, (b.col + 0.5) * sd, (b.row + 0.5) * sd,
                    spec.boundary);
      }
    }
  }
  return raster.ppm();
}

std::string render_heatmap_svg(const TrafficInstance& inst, std::span<const double> values,
                               std::size_t cell_size) {
  check_size(inst, values.size(), "value vector");
  if (cell_size == 0) throw ValidationError("cell size must be at least 1");
  const double peak = peak_of(values);
  const double s = static_cast<double>(cell_size);
  std::string out = svg_header(inst.cols * cell_size, inst.rows * cell_size);
  for (Index z = 0; z < values.size(); ++z) {
    const Cell c = cell_of(inst, z);
    out += "<rect class=\"zone\" x=\"" + fmt(static_cast<double>(c.col) * s) + "\" y=\"" +
           fmt(static_cast<double>(c.row) * s) + "\" width=\"" + fmt(s) + "\" height=\"" + fmt(s) +
           "\" fill=\"" + gray_for(values[z], peak).hex() + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_heatmap_ppm(const TrafficInstance& inst, std::span<const double> values,
                               std::size_t cell_size) {
  check_size(inst, values.size(), "value vector");
  if (cell_size == 0) throw ValidationError("cell size must be at least 1");
  const double peak = peak_of(values);
  Raster raster(inst.cols * cell_size, inst.rows * cell_size);
  for (Index z = 0; z < values.size(); ++z) {
    const Cell c = cell_of(inst, z);
    raster.fill(c.col * cell_size, c.row * cell_size, (c.col + 1) * cell_size, (c.row + 1) * cell_size,
                gray_for(values[z], peak));
  }
  return raster.ppm();
}

}  // namespace qzone
