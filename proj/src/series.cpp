#include "omviz/series.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace omviz {

std::string to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::walk: return "walk";
        case SeriesKind::periodic: return "periodic";
        case SeriesKind::linear: return "linear";
        case SeriesKind::exponential: return "exponential";
    }
    throw std::invalid_argument("unknown series kind");
}

SeriesKind series_kind_from_string(const std::string& name) {
    if (name == "walk") return SeriesKind::walk;
    if (name == "periodic") return SeriesKind::periodic;
    if (name == "linear") return SeriesKind::linear;
    if (name == "exponential") return SeriesKind::exponential;
    throw std::invalid_argument("unknown series kind: " + name);
}

std::string series_to_csv(const Series& s) {
    std::string out = "index,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, s.values[i]);
        out += buf;
    }
    return out;
}

Series series_from_csv_text(const std::string& text) {
    Series s;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("index", 0) == 0) continue;  // header optional
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("series csv: missing comma on line " +
                                     std::to_string(lineno));
        }
        try {
            s.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error("series csv: bad value on line " +
                                     std::to_string(lineno));
        }
    }
    return s;
}

Series series_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return series_from_csv_text(ss.str());
}

std::string series_manifest_json(const Series& s) {
    nlohmann::json j;
    j["seed"] = s.seed;
    j["kind"] = to_string(s.kind);
    j["range"] = {{"e_min", s.range.e_min}, {"e_max", s.range.e_max}};
    j["n"] = s.values.size();
    return j.dump(2) + "\n";
}

}  // namespace omviz
