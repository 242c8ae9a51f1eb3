#pragma once

// JSON serialization for curves, functions, subgraphs, maps, divisors, and
// recovery reports. Rationals travel as canonical "p/q" strings; emission
// order is deterministic so parse ∘ print is byte-stable.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "trop/curve.hpp"
#include "trop/morphism.hpp"
#include "trop/ratfun.hpp"
#include "trop/semiso.hpp"
#include "trop/subgraph.hpp"

namespace trop {

using Json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Err::ParseError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Json load_json(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::exception& e) {
        throw Error(Err::ParseError, "bad JSON in '" + path + "': " + e.what());
    }
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

// -------------------------------------------------- curves

inline Json curve_to_json(const TropicalCurve& c) {
    Json j;
    j["vertices"] = c.model().vertices;
    Json edges = Json::array();
    for (const auto& e : c.model().edges) {
        Json je;
        je["id"] = e.id;
        je["ends"] = {e.u, e.v};
        je["length"] = e.length.str();
        if (e.inf_end) je["inf_end"] = *e.inf_end;
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    return j;
}

inline Model model_from_json(const Json& j) {
    try {
        Model m;
        for (const auto& v : j.at("vertices")) m.vertices.push_back(v.get<std::string>());
        for (const auto& je : j.at("edges")) {
            Edge e;
            e.id = je.at("id").get<std::string>();
            e.u = je.at("ends").at(0).get<std::string>();
            e.v = je.at("ends").at(1).get<std::string>();
            e.length = ext_from_string(je.at("length").get<std::string>());
            if (je.contains("inf_end")) e.inf_end = je.at("inf_end").get<std::string>();
            m.edges.push_back(std::move(e));
        }
        return m;
    } catch (const Json::exception& e) {
        throw Error(Err::ParseError, std::string("bad curve JSON: ") + e.what());
    }
}

inline CurvePtr curve_from_json(const Json& j) { return build_curve(model_from_json(j)); }

// A curve slot holds either an inline curve object or a path string.
inline CurvePtr curve_from_slot(const Json& slot) {
    if (slot.is_string()) return curve_from_json(load_json(slot.get<std::string>()));
    return curve_from_json(slot);
}

// -------------------------------------------------- rational functions

inline Json ratfun_to_json(const RatFun& f) {
    Json j;
    j["curve"] = curve_to_json(*f.curve());
    j["bottom"] = f.is_bottom();
    Json segs = Json::object();
    if (!f.is_bottom()) {
        if (f.curve()->singleton()) {
            j["value"] = rat_to_string(f.point_value());
        } else {
            for (std::size_t ei = 0; ei < f.segments().size(); ++ei) {
                const Edge& e = f.curve()->edge(static_cast<int>(ei));
                const EdgeFun& ef = f.segments()[ei];
                Json js;
                Json breaks = Json::array();
                for (const auto& b : ef.breaks)
                    breaks.push_back({{"at", rat_to_string(b.at)}, {"value", rat_to_string(b.value)}});
                js["breaks"] = std::move(breaks);
                if (e.infinite()) js["tail_slope"] = ef.tail_slope;
                segs[e.id] = std::move(js);
            }
        }
    }
    j["segments"] = std::move(segs);
    return j;
}

inline RatFun ratfun_from_json(const Json& j, CurvePtr curve = nullptr) {
    try {
        if (!curve) curve = curve_from_slot(j.at("curve"));
        if (j.value("bottom", false)) return RatFun::bottom(curve);
        if (curve->singleton()) return RatFun::from_point_value(curve, rat_from_string(j.at("value").get<std::string>()));
        std::vector<EdgeFun> segs(curve->edge_count());
        const Json& js = j.at("segments");
        for (std::size_t ei = 0; ei < curve->edge_count(); ++ei) {
            const Edge& e = curve->edge(static_cast<int>(ei));
            if (!js.contains(e.id)) throw Error(Err::InvalidFunction, "missing segments for edge '" + e.id + "'");
            const Json& seg = js.at(e.id);
            EdgeFun ef;
            for (const auto& b : seg.at("breaks"))
                ef.breaks.push_back({rat_from_string(b.at("at").get<std::string>()),
                                     rat_from_string(b.at("value").get<std::string>())});
            ef.tail_slope = seg.value("tail_slope", 0);
            segs[ei] = std::move(ef);
        }
        return RatFun::from_segments(std::move(curve), std::move(segs));
    } catch (const Json::exception& e) {
        throw Error(Err::ParseError, std::string("bad function JSON: ") + e.what());
    }
}

// -------------------------------------------------- subgraphs

inline Json subgraph_to_json(const IntervalSet& s) {
    Json j;
    Json intervals = Json::array();
    for (std::size_t ei = 0; ei < s.intervals_by_edge().size(); ++ei) {
        const Edge& e = s.curve()->edge(static_cast<int>(ei));
        for (const auto& iv : s.intervals_by_edge()[ei])
            intervals.push_back({{"edge", e.id}, {"from", iv.lo.str()}, {"to", iv.hi.str()}});
    }
    j["intervals"] = std::move(intervals);
    Json points = Json::array();
    for (const auto& p : s.isolated_vertices()) points.push_back(p.str());
    j["points"] = std::move(points);
    return j;
}

inline IntervalSet subgraph_from_json(const Json& j, const CurvePtr& curve) {
    try {
        IntervalSet s(curve);
        if (j.contains("intervals"))
            for (const auto& iv : j.at("intervals"))
                s.add_interval(iv.at("edge").get<std::string>(),
                               ext_from_string(iv.at("from").get<std::string>()),
                               ext_from_string(iv.at("to").get<std::string>()));
        if (j.contains("points"))
            for (const auto& p : j.at("points")) s.add_point(parse_point(*curve, p.get<std::string>()));
        return s;
    } catch (const Json::exception& e) {
        throw Error(Err::ParseError, std::string("bad subgraph JSON: ") + e.what());
    }
}

// -------------------------------------------------- divisors

inline Json divisor_to_json(const Divisor& d) {
    Json j = Json::object();
    for (const auto& [p, order] : d.entries()) j[p.str()] = order;
    return j;
}

// -------------------------------------------------- expansive maps

inline Json map_to_json(const ExpansiveMap& m) {
    Json j;
    j["source"] = curve_to_json(*m.source());
    j["target"] = curve_to_json(*m.target());
    j["r"] = rat_to_string(m.factor());
    Json pieces = Json::array();
    for (const auto& p : m.pieces()) {
        Json jp;
        jp["src_edge"] = p.src_edge;
        jp["src_range"] = {rat_to_string(p.a), p.b.str()};
        jp["dst_edge"] = p.dst_edge;
        jp["dst_start"] = rat_to_string(p.c);
        jp["reversed"] = p.reversed;
        pieces.push_back(std::move(jp));
    }
    j["pieces"] = std::move(pieces);
    return j;
}

inline ExpansiveMap map_from_json(const Json& j) {
    try {
        CurvePtr src = curve_from_slot(j.at("source"));
        CurvePtr dst = curve_from_slot(j.at("target"));
        Rat r = rat_from_string(j.at("r").get<std::string>());
        std::vector<MapPiece> pieces;
        for (const auto& jp : j.at("pieces")) {
            MapPiece p;
            p.src_edge = jp.at("src_edge").get<std::string>();
            p.a = rat_from_string(jp.at("src_range").at(0).get<std::string>());
            p.b = ext_from_string(jp.at("src_range").at(1).get<std::string>());
            p.dst_edge = jp.at("dst_edge").get<std::string>();
            p.c = rat_from_string(jp.at("dst_start").get<std::string>());
            p.reversed = jp.value("reversed", false);
            pieces.push_back(std::move(p));
        }
        return ExpansiveMap::make(std::move(src), std::move(dst), std::move(r), std::move(pieces));
    } catch (const Json::exception& e) {
        throw Error(Err::ParseError, std::string("bad map JSON: ") + e.what());
    }
}

// -------------------------------------------------- recovery reports

inline Json report_to_json(const RecoveryReport& rep) {
    Json j;
    j["r"] = rat_to_string(rep.r);
    j["success"] = rep.success;
    Json pairs = Json::array();
    for (const auto& p : rep.pairs) {
        Json jp;
        jp["from"] = p.from.str();
        jp["to"] = p.to.str();
        jp["eps"] = rat_to_string(p.eps);
        jp["retries"] = p.retries;
        if (!p.argmax_log.empty()) jp["rejected"] = p.argmax_log;
        pairs.push_back(std::move(jp));
    }
    j["pairs"] = std::move(pairs);
    Json inf_pairs = Json::array();
    for (const auto& p : rep.infinite_pairs) {
        Json jp;
        jp["from"] = p.from.str();
        jp["to"] = p.to.str();
        jp["anchor_from"] = p.anchor_from.str();
        jp["anchor_to"] = p.anchor_to.str();
        jp["retries"] = p.retries;
        inf_pairs.push_back(std::move(jp));
    }
    j["infinite_pairs"] = std::move(inf_pairs);
    j["diagnostics"] = rep.diagnostics;
    return j;
}

// -------------------------------------------------- harmonic morphism data

inline HarmonicMorphismData harmonic_from_json(const Json& j) {
    try {
        HarmonicMorphismData data;
        data.source = model_from_json(j.at("source"));
        data.target = model_from_json(j.at("target"));
        for (const auto& [k, v] : j.at("vertex_map").items()) data.vertex_map[k] = v.get<std::string>();
        for (const auto& [k, v] : j.at("edge_map").items()) data.edge_map[k] = v.get<std::string>();
        for (const auto& [k, v] : j.at("edge_degree").items()) data.edge_degree[k] = v.get<long long>();
        data.declared_degree = j.value("declared_degree", 1);
        return data;
    } catch (const Json::exception& e) {
        throw Error(Err::ParseError, std::string("bad harmonic data JSON: ") + e.what());
    }
}

}  // namespace trop
