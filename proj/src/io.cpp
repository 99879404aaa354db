#include "hpd/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace hpd {

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw ParseError((pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// d x d array of numbers, row-major into out.
void read_square(const Json& j, std::size_t d, const std::string& ptr, std::vector<double>& out) {
  if (!j.is_array() || j.size() != d) fail(ptr, "expected an array of " + std::to_string(d) + " rows");
  out.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const Json& row = j[i];
    const std::string rptr = ptr + "/" + std::to_string(i);
    if (!row.is_array() || row.size() != d) fail(rptr, "expected a row of " + std::to_string(d) + " numbers");
    for (std::size_t k = 0; k < d; ++k) {
      if (!row[k].is_number()) fail(rptr + "/" + std::to_string(k), "expected a number");
      out[i * d + k] = row[k].get<double>();
    }
  }
}

HpdMatrix read_matrix(const Json& j, std::size_t d, bool allow_im, const std::string& ptr) {
  if (!j.is_object()) fail(ptr, "expected an object with \"re\" and optional \"im\"");
  if (!j.contains("re")) fail(ptr, "missing \"re\"");
  std::vector<double> re, im;
  read_square(j["re"], d, ptr + "/re", re);
  if (j.contains("im")) {
    if (!allow_im) fail(ptr + "/im", "imaginary part given for a real sample");
    read_square(j["im"], d, ptr + "/im", im);
  }
  try {
    return HpdMatrix(HermitianMatrix(CMatrix::from_parts(d, re, im)));
  } catch (const DomainError& e) {
    fail(ptr, e.what());
  }
}

std::size_t infer_dim(const Json& obs) {
  if (obs.is_object() && obs.contains("re") && obs["re"].is_array()) return obs["re"].size();
  return 0;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::string msg = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line L, column C: " prefix.
    const auto colon = msg.find(": ", msg.find("parse error"));
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ParseError(line_column(text, e.byte) + ": " + msg);
  }
}

std::string read_text_file(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const Json& j, int indent) { return j.dump(indent); }

SampleData parse_sample(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) fail("", "expected a JSON object");
  if (!doc.contains("observations") || !doc["observations"].is_array())
    fail("/observations", "missing array of observations");
  const Json& obs = doc["observations"];
  if (obs.empty()) fail("/observations", "no observations");

  const bool curves = doc.contains("grid");
  std::size_t d = 0;
  if (doc.contains("dim")) {
    if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::size_t>() == 0)
      fail("/dim", "expected a positive integer");
    d = doc["dim"].get<std::size_t>();
  } else {
    d = infer_dim(curves && obs[0].is_array() && !obs[0].empty() ? obs[0][0] : obs[0]);
    if (d == 0) fail("/dim", "missing and not inferable");
  }
  bool allow_im = true;
  if (doc.contains("complex")) {
    if (!doc["complex"].is_boolean()) fail("/complex", "expected a boolean");
    allow_im = doc["complex"].get<bool>();
  }

  SampleData out;
  if (!curves) {
    std::vector<HpdMatrix> xs;
    xs.reserve(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i)
      xs.push_back(read_matrix(obs[i], d, allow_im, "/observations/" + std::to_string(i)));
    out.sample.emplace(std::move(xs));
    return out;
  }

  const Json& g = doc["grid"];
  if (!g.is_array() || g.empty()) fail("/grid", "expected a non-empty array of numbers");
  std::vector<double> grid;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (!g[t].is_number()) fail("/grid/" + std::to_string(t), "expected a number");
    grid.push_back(g[t].get<double>());
  }
  std::vector<HpdCurve> cs;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const std::string ptr = "/observations/" + std::to_string(i);
    if (!obs[i].is_array() || obs[i].size() != grid.size())
      fail(ptr, "expected a curve of " + std::to_string(grid.size()) + " matrices");
    HpdCurve c;
    for (std::size_t t = 0; t < grid.size(); ++t)
      c.push_back(read_matrix(obs[i][t], d, allow_im, ptr + "/" + std::to_string(t)));
    cs.push_back(std::move(c));
  }
  try {
    out.curves.emplace(std::move(grid), std::move(cs));
  } catch (const DomainError& e) {
    fail("/grid", e.what());
  }
  return out;
}

SampleData read_sample_file(const std::string& path) { return parse_sample(read_text_file(path)); }

HpdMatrix parse_matrix(std::string_view text) {
  const Json doc = parse_json(text);
  if (doc.is_object() && doc.contains("observations")) {
    const SampleData s = parse_sample(text);
    if (!s.sample || s.sample->size() != 1) fail("/observations", "expected exactly one matrix");
    return (*s.sample)[0];
  }
  if (!doc.is_object() || !doc.contains("re") || !doc["re"].is_array())
    fail("", "expected a matrix object with \"re\"");
  return read_matrix(doc, doc["re"].size(), true, "");
}

HpdMatrix read_matrix_file(const std::string& path) { return parse_matrix(read_text_file(path)); }

Json matrix_to_json(const CMatrix& m) {
  const std::size_t d = m.dim();
  Json re = Json::array(), im = Json::array();
  bool has_im = false;
  for (std::size_t i = 0; i < d; ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (std::size_t j = 0; j < d; ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
      has_im = has_im || m(i, j).imag() != 0.0;
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  Json out{{"re", std::move(re)}};
  if (has_im) out["im"] = std::move(im);
  return out;
}

Json matrix_to_json(const HpdMatrix& m) { return matrix_to_json(m.matrix()); }

Json sample_to_json(const HpdSample& s) {
  Json obs = Json::array();
  for (const auto& x : s.observations()) obs.push_back(matrix_to_json(x));
  return Json{{"dim", s.dim()}, {"complex", true}, {"observations", std::move(obs)}};
}

Json curves_to_json(const HpdCurveSample& c) {
  Json obs = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    Json curve = Json::array();
    for (const auto& x : c.curve(i)) curve.push_back(matrix_to_json(x));
    obs.push_back(std::move(curve));
  }
  return Json{{"dim", c.dim()},
              {"complex", true},
              {"grid", std::vector<double>(c.grid().begin(), c.grid().end())},
              {"observations", std::move(obs)}};
}

}  // namespace hpd
