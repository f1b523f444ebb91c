#pragma once

#include <string>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/outline.hpp"

namespace morphkit {

// Extracts the longest closed iso-contour of the min-max normalized image at
// the given threshold, using marching squares with linear sub-pixel
// interpolation between pixel centers. Throws NoContour when nothing crosses
// the threshold and OpenContourOnly when every contour runs off the image
// border without closing.
Outline extract_contour(const GrayImage& image, double threshold,
                        const std::string& source_id = "contour");

// All closed contours at the threshold, longest first. Used by
// extract_contour; exposed for diagnostics.
std::vector<std::vector<Vec2>> extract_all_closed_contours(
    const GrayImage& image, double threshold);

}  // namespace morphkit
