#pragma once

#include <vector>

#include "botd/geometry.hpp"

namespace botd {

/// Training label of one text instance: the center mask (CM) and the polar minimum
/// distance (PMD) from the instance center to its outline.
struct InstanceLabel {
    Point2 center;
    double pmd = 0.0;
    BinaryMask cm;
    double cm_scale = 0.5;
};

/// Classification and regression head targets of one image.
struct LabelMaps {
    BinaryMask cls;
    Raster reg;
};

/// Erosion radius that turns a text mask into its CM, and the bolding radius that
/// turns the CM back: (1 - cm_scale) * pmd.
double bolding_radius(double pmd, double cm_scale);

void check_cm_scale(double cm_scale);

/// Rasterizes `poly`, takes the distance-transform maximum as center and PMD, and
/// keeps the component of erode_disk(mask, (1 - cm_scale) * pmd) holding the center.
/// Falls back to the single center pixel if that component does not exist.
InstanceLabel make_instance_label(const Polygon& poly, int width, int height, double cm_scale);

/// Same, from an already rasterized text mask.
InstanceLabel make_instance_label(const BinaryMask& text_mask, double cm_scale);

/// cls is the union of CMs; reg carries the owning instance's PMD. Overlapping CMs are
/// resolved in favour of the smaller PMD.
LabelMaps render_label_maps(const std::vector<InstanceLabel>& labels, int width, int height);

}  // namespace botd
