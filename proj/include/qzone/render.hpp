#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "qzone/zoning.hpp"

namespace qzone {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  std::string hex() const;
};

struct RenderSpec {
  std::size_t cell_size = 24;
  /// Region A (x = 1) is drawn dark, region B (x = 0) light.
  Rgb region_a{0x1f, 0x3b, 0x73};
  Rgb region_b{0xd9, 0xe4, 0xf5};
  bool show_boundary = true;
  Rgb boundary{0xd6, 0x27, 0x28};
};

enum class ImageFormat { svg, ppm };

ImageFormat parse_image_format(const std::string& name);

/// Grid map of the partition. Cut edges between grid neighbors are drawn on
/// the shared cell border; any other cut edge as a center-to-center line.
/// Each cut edge emits exactly one element with class "cut".
std::string render_partition_svg(const TrafficInstance& instance, std::span<const std::uint8_t> x,
                                 const RenderSpec& spec = {});

/// Binary P6 raster of the same map.
std::string render_partition_ppm(const TrafficInstance& instance, std::span<const std::uint8_t> x,
                                 const RenderSpec& spec = {});

/// Grayscale heatmap: black for the largest |value|, white for zero.
std::string render_heatmap_svg(const TrafficInstance& instance, std::span<const double> values,
                               std::size_t cell_size = 24);
std::string render_heatmap_ppm(const TrafficInstance& instance, std::span<const double> values,
                               std::size_t cell_size = 24);

}  // namespace qzone
