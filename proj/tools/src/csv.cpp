#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "eivtls/errors.hpp"

namespace eivtls::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& token) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (begin != end && *begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InvalidSpecError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  bool first_content_line = true;
  Eigen::Index cols = -1;

  while (std::getline(file, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty()) continue;
    const std::vector<std::string> fields = split_fields(content);

    if (first_content_line) {
      first_content_line = false;
      if (!parse_number(fields.front()).has_value()) continue;  // header row
    }

    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& field : fields) {
      const std::optional<double> value = parse_number(field);
      if (!value.has_value()) {
        std::ostringstream os;
        os << path << ":" << line_no << ": not a number: '" << field << "'";
        throw InvalidSpecError(os.str());
      }
      row.push_back(*value);
    }
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      std::ostringstream os;
      os << path << ":" << line_no << ": expected " << cols << " fields, got " << row.size();
      throw InvalidSpecError(os.str());
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw InvalidSpecError(path + ": no numeric rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

}  // namespace eivtls::cli
