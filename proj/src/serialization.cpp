#include "mibridge/serialization.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mibridge {

const char* const kInverseWishartConvention =
    "precision-scale: S ~ W^-1(df, Lambda) iff S^-1 ~ Wishart(df, Lambda); "
    "density proportional to |S|^(-(df+p+1)/2) exp(-tr(Lambda^-1 S^-1)/2). "
    "For p = 1 this is InvGamma(shape df/2, scale 1/(2 Lambda)).";

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json to_json(const Matrix& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + ": expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument(what + ": expected numbers");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(what + ": expected a nonempty array of rows");
  }
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix a(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw std::invalid_argument(what + ": rows must be arrays of equal length");
    }
    a.row(static_cast<Index>(i)) = vector_from_json(j[i], what).transpose();
  }
  return a;
}

void reject_unknown_fields(const Json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& what) {
  if (!obj.is_object()) throw std::invalid_argument(what + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw std::invalid_argument(what + ": unknown field '" + item.key() + "'");
    }
  }
}

namespace {

const Json& required(const Json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key)) {
    throw std::invalid_argument(what + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw std::invalid_argument(what + ": expected a number");
  return j.get<double>();
}

}  // namespace

Json to_json(const NiwPrior& prior) {
  Json j;
  j["type"] = "niw";
  j["mu0"] = to_json(prior.mu0());
  j["tau"] = prior.tau();
  j["m"] = prior.m();
  j["lambda"] = to_json(prior.lambda());
  j["convention"] = kInverseWishartConvention;
  return j;
}

NiwPrior niw_prior_from_json(const Json& j) {
  const std::string what = "NIW prior";
  reject_unknown_fields(j, {"type", "mu0", "tau", "m", "lambda", "convention"}, what);
  if (j.contains("type") && j.at("type") != "niw") {
    throw std::invalid_argument(what + ": type must be \"niw\"");
  }
  return NiwPrior(vector_from_json(required(j, "mu0", what), what + " mu0"),
                  number(required(j, "tau", what), what + " tau"),
                  number(required(j, "m", what), what + " m"),
                  matrix_from_json(required(j, "lambda", what), what + " lambda"));
}

Json to_json(const NigPrior& prior, const std::vector<std::string>& column_names) {
  const Index p = prior.coef_mean.size();
  if (static_cast<Index>(column_names.size()) != p) {
    throw std::invalid_argument("NIG prior: column names do not match its dimension");
  }
  std::vector<std::string> coef_names{"(intercept)"};
  for (Index k : complement_of(p, prior.j)) coef_names.push_back(column_names[static_cast<std::size_t>(k)]);
  const StudentTParams t = marginal_t_params(prior);

  Json j;
  j["column"] = column_names[static_cast<std::size_t>(prior.j)];
  j["index"] = prior.j;
  j["coefficients"] = coef_names;
  j["sigma"] = {{"distribution", "inverse-wishart"},
                {"df", prior.sigma_df},
                {"scale", prior.sigma_scale}};
  j["sigma_inverse_gamma"] = {{"shape", prior.sigma_ig_shape()},
                              {"scale", prior.sigma_ig_scale()}};
  j["coef_mean"] = to_json(prior.coef_mean);
  j["coef_scale_given_sigma"] = to_json(prior.coef_scale_given_sigma);
  j["coef_covariance_at_sigma_scale"] = to_json(prior.coef_covariance_at_scale());
  j["marginal_t"] = {{"df", t.df}, {"loc", to_json(t.loc)}, {"scale", to_json(t.scale)}};
  return j;
}

NigPrior nig_prior_from_json(const Json& j, const std::vector<std::string>& column_names) {
  const std::string what = "NIG prior";
  reject_unknown_fields(j,
                        {"column", "index", "coefficients", "sigma", "sigma_inverse_gamma",
                         "coef_mean", "coef_scale_given_sigma",
                         "coef_covariance_at_sigma_scale", "marginal_t"},
                        what);
  NigPrior prior;
  if (j.contains("column")) {
    const auto name = j.at("column").get<std::string>();
    const auto it = std::find(column_names.begin(), column_names.end(), name);
    if (it == column_names.end()) throw std::invalid_argument(what + ": unknown column " + name);
    prior.j = static_cast<Index>(it - column_names.begin());
    if (j.contains("index") && j.at("index").get<Index>() != prior.j) {
      throw std::invalid_argument(what + ": column and index disagree");
    }
  } else {
    prior.j = required(j, "index", what).get<Index>();
  }
  const Json& sigma = required(j, "sigma", what);
  reject_unknown_fields(sigma, {"distribution", "df", "scale"}, what + " sigma");
  prior.sigma_df = number(required(sigma, "df", what), what + " sigma df");
  prior.sigma_scale = number(required(sigma, "scale", what), what + " sigma scale");
  prior.coef_mean = vector_from_json(required(j, "coef_mean", what), what + " coef_mean");
  prior.coef_scale_given_sigma =
      matrix_from_json(required(j, "coef_scale_given_sigma", what), what + " coef_scale");
  prior.validate();
  return prior;
}

Json nig_prior_set_document(const NiwPrior& prior,
                            const std::vector<std::string>& column_names,
                            std::optional<Index> only, const std::string& source_sha256) {
  if (static_cast<Index>(column_names.size()) != prior.dim()) {
    throw std::invalid_argument("column names do not match the prior dimension");
  }
  Json doc;
  doc["format"] = "nig-prior-set";
  doc["version"] = 1;
  doc["convention"] = {
      {"inverse_wishart", kInverseWishartConvention},
      {"coefficients",
       "(intercept, slopes in column order) | sigma ~ N(coef_mean, sigma * "
       "coef_scale_given_sigma)"},
      {"coef_covariance_at_sigma_scale", "sigma.scale * coef_scale_given_sigma"},
      {"marginal_t_df", "equals sigma.df (the joint prior's m)"}};
  doc["source"] = {{"sha256", source_sha256}, {"prior", to_json(prior)}};
  doc["columns"] = column_names;
  Json priors = Json::array();
  for (Index j = 0; j < prior.dim(); ++j) {
    if (only && *only != j) continue;
    priors.push_back(to_json(decompose(prior, j).conditional, column_names));
  }
  doc["priors"] = std::move(priors);
  return doc;
}

std::vector<NigPrior> nig_priors_from_document(const Json& doc,
                                               std::vector<std::string>* column_names) {
  const std::string what = "NIG prior set";
  reject_unknown_fields(doc, {"format", "version", "convention", "source", "columns", "priors"},
                        what);
  if (doc.contains("format") && doc.at("format") != "nig-prior-set") {
    throw std::invalid_argument(what + ": format must be \"nig-prior-set\"");
  }
  const auto names = required(doc, "columns", what).get<std::vector<std::string>>();
  std::vector<NigPrior> out;
  for (const Json& p : required(doc, "priors", what)) out.push_back(nig_prior_from_json(p, names));
  if (column_names) *column_names = names;
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  if (line.empty()) fields.emplace_back();
  return fields;
}

std::string trimmed(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

IncompleteData parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CSV: empty input");
  std::vector<std::string> names;
  for (auto& f : split_csv_line(line)) names.push_back(trimmed(f));
  const std::size_t p = names.size();
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<bool>> missing;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != p) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(p) + " fields");
    }
    std::vector<double> row(p);
    std::vector<bool> miss(p);
    for (std::size_t k = 0; k < p; ++k) {
      const std::string f = trimmed(fields[k]);
      if (f.empty() || f == "NA") {
        miss[k] = true;
        row[k] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                    ": cannot parse '" + f + "'");
      }
      row[k] = v;
    }
    rows.push_back(std::move(row));
    missing.push_back(std::move(miss));
  }
  Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(p));
  Mask mask(static_cast<Index>(rows.size()), static_cast<Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < p; ++k) {
      values(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
      mask(static_cast<Index>(i), static_cast<Index>(k)) = missing[i][k];
    }
  }
  return IncompleteData(std::move(values), std::move(mask), std::move(names));
}

IncompleteData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_csv(in);
}

void write_csv(std::ostream& out, const Matrix& values,
               const std::vector<std::string>& column_names, const Mask* mask) {
  for (std::size_t k = 0; k < column_names.size(); ++k) {
    out << (k ? "," : "") << column_names[k];
  }
  out << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index k = 0; k < values.cols(); ++k) {
      if (k) out << ',';
      if (!(mask && (*mask)(i, k))) out << format_double(values(i, k));
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& column_names, const Mask* mask) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, values, column_names, mask);
}

}  // namespace mibridge
