#pragma once

// Deterministic DOT export for figures: edge lengths, function breakpoints,
// and divisor orders as labels.

#include <optional>
#include <sstream>
#include <string>

#include "trop/curve.hpp"
#include "trop/ratfun.hpp"

namespace trop {

inline std::string export_dot(const TropicalCurve& c, const RatFun* f = nullptr,
                              const Divisor* div = nullptr) {
    std::ostringstream out;
    out << "graph curve {\n";
    for (const auto& vid : c.model().vertices) {
        std::string label = vid;
        int vi = *c.find_vertex(vid);
        if (c.is_infinite_end(vi)) label += " (inf)";
        if (div) {
            PointRef p = c.canonical_point(PointRef::vertex(vid));
            if (long long order = div->order_at(p); order != 0)
                label += " | " + std::string(order > 0 ? "+" : "") + std::to_string(order);
        }
        out << "  \"" << vid << "\" [label=\"" << label << "\"];\n";
    }
    for (std::size_t ei = 0; ei < c.edge_count(); ++ei) {
        const Edge& e = c.edge(static_cast<int>(ei));
        std::string label = e.id + ": " + e.length.str();
        if (f) {
            if (f->is_bottom()) {
                label += " | f: -inf";
            } else {
                label += " | f:";
                for (const auto& b : f->segments()[ei].breaks)
                    label += " " + rat_to_string(b.value) + "@" + rat_to_string(b.at);
                if (e.infinite()) label += " tail " + std::to_string(f->segments()[ei].tail_slope);
            }
        }
        if (div) {
            std::string marks;
            for (const auto& [p, order] : div->entries())
                if (p.is_interior() && p.id == e.id)
                    marks += " " + std::string(order > 0 ? "+" : "") + std::to_string(order) + "@" +
                             rat_to_string(p.offset);
            if (!marks.empty()) label += " | D:" + marks;
        }
        out << "  \"" << e.u << "\" -- \"" << e.v << "\" [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace trop
