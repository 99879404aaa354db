#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hpd/sample.hpp"

namespace hpd {

using Json = nlohmann::json;

/// Malformed input: JSON syntax (with line and column) or schema violations
/// (with the JSON pointer of the offending value).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contents of a sample file: a plain sample, or curves when "grid" is present.
struct SampleData {
  std::optional<HpdSample> sample;
  std::optional<HpdCurveSample> curves;
};

/// {"dim": d, "complex": bool, "observations": [{"re": [[..]], "im": [[..]]}, ..]}
/// with an optional "grid": [t..], in which case each observation is a list of
/// T matrices. "im" may be omitted; "complex": false forbids it.
SampleData parse_sample(std::string_view text);
SampleData read_sample_file(const std::string& path);

/// A single matrix {"re": .., "im": ..}, or a sample file with exactly one observation.
HpdMatrix parse_matrix(std::string_view text);
HpdMatrix read_matrix_file(const std::string& path);

Json matrix_to_json(const CMatrix& m);
Json matrix_to_json(const HpdMatrix& m);
Json sample_to_json(const HpdSample& s);
Json curves_to_json(const HpdCurveSample& c);

/// Serialized text; doubles are written in shortest round-trip form (at most
/// 17 significant digits), so reading back is exact.
std::string dump(const Json& j, int indent = 2);
/// Parses JSON text, reporting syntax errors as "line L, column C: ...".
Json parse_json(std::string_view text);
/// "-" reads standard input.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace hpd
