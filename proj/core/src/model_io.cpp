#include "parsim/model_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "parsim/error.hpp"

namespace parsim::io {

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCategory::io, std::string("model JSON: missing matrix \"") + key + "\"");
  }
  const auto& rows = j.at(key);
  const auto n_rows = static_cast<Index>(rows.size());
  const Index n_cols = n_rows == 0 ? 0 : static_cast<Index>(rows.at(0).size());
  Matrix m(n_rows, n_cols);
  for (Index r = 0; r < n_rows; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Index>(row.size()) != n_cols) {
      throw Error(ErrorCategory::io, std::string("model JSON: ragged matrix \"") + key + "\"");
    }
    for (Index c = 0; c < n_cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCategory::io, "write failed for " + path.string());
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream msg;
    msg << "CSV line " << line << ": cannot parse number '" << field << "'";
    throw Error(ErrorCategory::io, msg.str());
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error(ErrorCategory::numeric, "cannot format double");
  return std::string(buf, ptr);
}

nlohmann::json model_to_json(const StateSpaceModel& m) {
  nlohmann::json j;
  j["A"] = matrix_to_json(m.A());
  j["B"] = matrix_to_json(m.B());
  j["C"] = matrix_to_json(m.C());
  j["D"] = matrix_to_json(m.D());
  j["K"] = matrix_to_json(m.K());
  j["sigma_e2"] = m.sigma_e2();
  j["n_x"] = m.nx();
  j["n_u"] = m.nu();
  j["n_y"] = m.ny();
  return j;
}

StateSpaceModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCategory::io, "model JSON: expected an object");
  Matrix a = matrix_from_json(j, "A");
  Matrix b = matrix_from_json(j, "B");
  Matrix c = matrix_from_json(j, "C");
  Matrix d = matrix_from_json(j, "D");
  Matrix k = matrix_from_json(j, "K");
  const double sigma = j.value("sigma_e2", 0.0);
  for (const char* key : {"n_x", "n_u", "n_y"}) {
    if (!j.contains(key)) {
      throw Error(ErrorCategory::io, std::string("model JSON: missing \"") + key + "\"");
    }
  }
  if (j.at("n_x").get<Index>() != a.rows() || j.at("n_u").get<Index>() != b.cols() ||
      j.at("n_y").get<Index>() != c.rows()) {
    throw Error(ErrorCategory::io, "model JSON: n_x/n_u/n_y disagree with matrix shapes");
  }
  try {
    return StateSpaceModel(std::move(a), std::move(b), std::move(c), std::move(d), std::move(k),
                           sigma);
  } catch (const Error& e) {
    throw Error(ErrorCategory::io, "model JSON: " + e.message());
  }
}

void write_model(const std::filesystem::path& path, const StateSpaceModel& m) {
  write_file(path, model_to_json(m).dump(2) + "\n");
}

StateSpaceModel read_model(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::io, path.string() + ": " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::io, path.string() + ": " + e.what());
  }
}

void write_record_csv(const std::filesystem::path& path, const SignalRecord& rec) {
  rec.validate();
  std::string out = "t,u,y\n";
  for (Index t = 0; t < rec.size(); ++t) {
    out += std::to_string(t);
    out += ',';
    out += format_double(rec.u(t));
    out += ',';
    out += format_double(rec.y(t));
    out += '\n';
  }
  write_file(path, out);
}

SignalRecord read_record_csv(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCategory::io, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,u,y") {
    throw Error(ErrorCategory::io, path.string() + ": expected header 't,u,y'");
  }
  std::vector<double> u, y;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 3) {
      std::ostringstream msg;
      msg << path.string() << ": line " << line_no << " has " << fields.size()
          << " fields, expected 3";
      throw Error(ErrorCategory::io, msg.str());
    }
    u.push_back(parse_double(fields[1], line_no));
    y.push_back(parse_double(fields[2], line_no));
  }
  SignalRecord rec;
  rec.u = Eigen::Map<const Vector>(u.data(), static_cast<Index>(u.size()));
  rec.y = Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size()));
  try {
    rec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCategory::io, path.string() + ": " + e.message());
  }
  return rec;
}

}  // namespace parsim::io
