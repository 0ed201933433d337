#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omviz/magnitude.hpp"

namespace omviz {

enum class SeriesKind { walk, periodic, linear, exponential };

std::string to_string(SeriesKind kind);
SeriesKind series_kind_from_string(const std::string& name);

/// An ordered sequence of positive samples together with the magnitude range
/// it was generated for and the seed that reproduces it.
struct Series {
    std::vector<double> values;
    std::uint64_t seed = 0;
    MagnitudeRange range;
    SeriesKind kind = SeriesKind::walk;

    std::size_t size() const { return values.size(); }
};

/// CSV with an "index,value" header; values printed round-trip exact.
std::string series_to_csv(const Series& s);
Series series_from_csv_text(const std::string& text);
Series series_from_csv_file(const std::string& path);

/// JSON manifest carrying seed, kind, and range (not the samples).
std::string series_manifest_json(const Series& s);

}  // namespace omviz
