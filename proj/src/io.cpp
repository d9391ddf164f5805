#include "fcd/io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace fcd {

namespace {

using nlohmann::json;

json parse_object(const std::string& line, int line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw InputError(line_number, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw InputError(line_number, "record is not a JSON object");
  }
  return j;
}

ImageSize parse_image(const json& j, int line_number) {
  if (!j.is_object() || !j.contains("w") || !j.contains("h") ||
      !j["w"].is_number_integer() || !j["h"].is_number_integer()) {
    throw InputError(line_number,
                     "\"image\" must be an object {\"w\": int, \"h\": int}");
  }
  ImageSize size{j["w"].get<int>(), j["h"].get<int>()};
  if (size.width <= 0 || size.height <= 0) {
    throw InputError(line_number, "image size must be positive");
  }
  return size;
}

PointMatrix parse_points(const json& j, int line_number) {
  if (!j.is_array() || j.empty()) {
    throw InputError(line_number, "polygon must be a non-empty array");
  }
  PointMatrix pts(static_cast<Eigen::Index>(j.size()), 2);
  for (size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
        !p[1].is_number()) {
      throw InputError(line_number, "polygon point " + std::to_string(i) +
                                        " must be [x, y]");
    }
    pts(static_cast<Eigen::Index>(i), 0) = p[0].get<double>();
    pts(static_cast<Eigen::Index>(i), 1) = p[1].get<double>();
  }
  return pts;
}

}  // namespace

ContourRecord parse_contour_record(const std::string& line, int line_number) {
  const json j = parse_object(line, line_number);
  if (!j.contains("image")) {
    throw InputError(line_number, "missing \"image\"");
  }
  if (!j.contains("polygons") || !j["polygons"].is_array()) {
    throw InputError(line_number, "missing \"polygons\" array");
  }

  ContourRecord record;
  record.image = parse_image(j["image"], line_number);
  for (const json& poly : j["polygons"]) {
    record.polygons.push_back(parse_points(poly, line_number));
  }

  if (j.contains("scores")) {
    const json& scores = j["scores"];
    if (!scores.is_array() || scores.size() != record.polygons.size()) {
      throw InputError(line_number,
                       "\"scores\" must have one number per polygon");
    }
    for (const json& s : scores) {
      if (!s.is_number()) {
        throw InputError(line_number, "scores must be numbers");
      }
      record.scores.push_back(s.get<double>());
    }
  }
  if (j.contains("ignore")) {
    const json& ignore = j["ignore"];
    if (!ignore.is_array() || ignore.size() != record.polygons.size()) {
      throw InputError(line_number,
                       "\"ignore\" must have one boolean per polygon");
    }
    for (const json& b : ignore) {
      if (!b.is_boolean()) {
        throw InputError(line_number, "ignore flags must be booleans");
      }
      record.ignore.push_back(b.get<bool>());
    }
  }
  return record;
}

DescriptorRecord parse_descriptor_record(const std::string& line,
                                         int line_number) {
  const json j = parse_object(line, line_number);
  if (!j.contains("k") || !j["k"].is_number_integer()) {
    throw InputError(line_number, "missing integer \"k\"");
  }
  const int k = j["k"].get<int>();
  if (k < 0) {
    throw InputError(line_number, "\"k\" must be >= 0");
  }
  if (!j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw InputError(line_number, "missing \"coeffs\" array");
  }
  const json& coeffs = j["coeffs"];
  const Eigen::Index expected = descriptor_length(k);
  if (static_cast<Eigen::Index>(coeffs.size()) != expected) {
    throw InputError(line_number, "\"coeffs\" must have " +
                                      std::to_string(expected) +
                                      " entries for k = " + std::to_string(k) +
                                      ", got " + std::to_string(coeffs.size()));
  }

  DescriptorRecord record;
  record.fd.k_max = k;
  record.fd.coeffs.resize(expected);
  for (Eigen::Index i = 0; i < expected; ++i) {
    const json& c = coeffs[static_cast<size_t>(i)];
    if (!c.is_number()) {
      throw InputError(line_number, "coefficients must be numbers");
    }
    record.fd.coeffs(i) = c.get<double>();
  }
  if (!record.fd.coeffs.allFinite()) {
    throw InputError(line_number, "coefficients must be finite");
  }

  if (j.contains("image")) {
    record.image = parse_image(j["image"], line_number);
  }
  if (j.contains("score")) {
    if (!j["score"].is_number()) {
      throw InputError(line_number, "\"score\" must be a number");
    }
    record.score = j["score"].get<double>();
  }
  return record;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

void append_image(std::string& out, const ImageSize& image) {
  out += "{\"w\":";
  out += std::to_string(image.width);
  out += ",\"h\":";
  out += std::to_string(image.height);
  out += "}";
}

void append_points(std::string& out, const PointMatrix& pts) {
  out += "[";
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    if (i) out += ",";
    out += "[";
    out += format_double(pts(i, 0));
    out += ",";
    out += format_double(pts(i, 1));
    out += "]";
  }
  out += "]";
}

}  // namespace

std::string to_json(const ContourRecord& record) {
  std::string out = "{\"image\":";
  append_image(out, record.image);
  out += ",\"polygons\":[";
  for (size_t p = 0; p < record.polygons.size(); ++p) {
    if (p) out += ",";
    append_points(out, record.polygons[p]);
  }
  out += "]";
  if (!record.scores.empty()) {
    out += ",\"scores\":[";
    for (size_t i = 0; i < record.scores.size(); ++i) {
      if (i) out += ",";
      out += format_double(record.scores[i]);
    }
    out += "]";
  }
  if (!record.ignore.empty()) {
    out += ",\"ignore\":[";
    for (size_t i = 0; i < record.ignore.size(); ++i) {
      if (i) out += ",";
      out += record.ignore[i] ? "true" : "false";
    }
    out += "]";
  }
  out += "}";
  return out;
}

std::string to_json(const DescriptorRecord& record) {
  std::string out = "{";
  if (record.image) {
    out += "\"image\":";
    append_image(out, *record.image);
    out += ",";
  }
  out += "\"k\":";
  out += std::to_string(record.fd.k_max);
  out += ",\"coeffs\":[";
  for (Eigen::Index i = 0; i < record.fd.coeffs.size(); ++i) {
    if (i) out += ",";
    out += format_double(record.fd.coeffs(i));
  }
  out += "]";
  if (record.score) {
    out += ",\"score\":";
    out += format_double(*record.score);
  }
  out += "}";
  return out;
}

std::string to_json(const MatchResult& result) {
  std::string out = "{\"positives\":[";
  for (size_t i = 0; i < result.positives.size(); ++i) {
    if (i) out += ",";
    out += "[" + std::to_string(result.positives[i].first) + "," +
           std::to_string(result.positives[i].second) + "]";
  }
  out += "],\"negatives\":[";
  for (size_t i = 0; i < result.negatives.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(result.negatives[i]);
  }
  out += "]}";
  return out;
}

}  // namespace fcd
