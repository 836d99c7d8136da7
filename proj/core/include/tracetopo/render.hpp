#pragma once

#include <string>

#include "tracetopo/persistence.hpp"

namespace tracetopo {

struct RenderConfig {
    int width = 640;
    int height = 0;  // 0: derived from content (barcode) or square (diagram)
};

// Barcode: one horizontal bar per interval, grouped into per-dimension
// layers, infinite bars drawn to the right margin with an arrow head.
// Output is SVG 1.1 and byte-deterministic for a fixed diagram and
// config. Throws DataError on a fully empty diagram.
std::string render_barcode_svg(const PersistenceDiagram& diag, const RenderConfig& config = {});

// Birth/death scatter with the diagonal reference line; points colored
// per dimension; infinite deaths sit on a dedicated rule above the
// finite range.
std::string render_diagram_svg(const PersistenceDiagram& diag, const RenderConfig& config = {});

}  // namespace tracetopo
