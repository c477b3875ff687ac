#include "packperc/io.hpp"

#include <stdexcept>

namespace packperc {

using nlohmann::json;

json shape_to_json(const Shape& s) {
    json j;
    if (const auto* d = std::get_if<Disk>(&s)) {
        j["type"] = "disk";
        j["center"] = {d->center[0], d->center[1]};
        j["radius"] = d->radius;
    } else if (const auto* b = std::get_if<Box>(&s)) {
        j["type"] = "box";
        j["min"] = b->lo;
        j["sides"] = b->sides;
    } else {
        const auto& e = std::get<Ellipse>(s);
        j["type"] = "ellipse";
        j["center"] = {e.center[0], e.center[1]};
        j["semi_axes"] = {e.a, e.b};
        j["angle"] = e.angle;
    }
    return j;
}

Shape shape_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "disk") {
        Disk d;
        d.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
        d.radius = j.at("radius").get<double>();
        return d;
    }
    if (type == "box") {
        Box b;
        b.lo = j.at("min").get<std::vector<double>>();
        b.sides = j.at("sides").get<std::vector<double>>();
        return b;
    }
    if (type == "ellipse") {
        Ellipse e;
        e.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
        e.a = j.at("semi_axes").at(0).get<double>();
        e.b = j.at("semi_axes").at(1).get<double>();
        e.angle = j.at("angle").get<double>();
        return e;
    }
    throw std::invalid_argument("unknown shape type: " + type);
}

json packing_to_json(const Packing& p) {
    json j;
    j["dimension"] = p.dimension;
    j["overlap_tol"] = p.overlap_tol;
    j["shapes"] = json::array();
    for (const auto& s : p.shapes) j["shapes"].push_back(shape_to_json(s));
    return j;
}

Packing packing_from_json(const json& j) {
    Packing p;
    p.dimension = j.at("dimension").get<int>();
    if (j.contains("overlap_tol")) p.overlap_tol = j.at("overlap_tol").get<double>();
    for (const auto& js : j.at("shapes")) p.shapes.push_back(shape_from_json(js));
    return p;
}

std::string packing_to_string(const Packing& p) { return packing_to_json(p).dump(); }

Packing packing_from_string(const std::string& text) { return packing_from_json(json::parse(text)); }

}  // namespace packperc
