#pragma once

#include "mibridge/data.hpp"
#include "mibridge/prior_bridge.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mibridge {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

std::string sha256_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

Json to_json(const Vector& v);
Json to_json(const Matrix& a);
Vector vector_from_json(const Json& j, const std::string& what);
Matrix matrix_from_json(const Json& j, const std::string& what);

/// Throws std::invalid_argument naming the first key of `obj` not in
/// `allowed`.
void reject_unknown_fields(const Json& obj, std::initializer_list<std::string_view> allowed,
                           const std::string& what);

/// Text describing the precision-scale inverse-Wishart convention used by
/// every prior document.
extern const char* const kInverseWishartConvention;

/// {"type": "niw", "mu0", "tau", "m", "lambda", "convention"}.
Json to_json(const NiwPrior& prior);
NiwPrior niw_prior_from_json(const Json& j);

/// One conditional prior, with derived forms (inverse-gamma parameters,
/// coefficient covariance at the sigma scale, marginal t) included for
/// reading; only sigma, coef_mean and coef_scale_given_sigma are read back.
Json to_json(const NigPrior& prior, const std::vector<std::string>& column_names);
NigPrior nig_prior_from_json(const Json& j, const std::vector<std::string>& column_names);

/// The conditional priors implied by a joint prior: every column, or only
/// `only` when set. The document records the convention, the source prior
/// and `source_sha256`.
Json nig_prior_set_document(const NiwPrior& prior,
                            const std::vector<std::string>& column_names,
                            std::optional<Index> only, const std::string& source_sha256);

std::vector<NigPrior> nig_priors_from_document(const Json& doc,
                                               std::vector<std::string>* column_names = nullptr);

/// Reads a header row of column names and then numeric rows; an empty
/// field marks a missing cell.
IncompleteData parse_csv(std::istream& in);
IncompleteData read_csv(const std::filesystem::path& path);

/// Writes the header and rows; cells where `mask` is true are left empty.
void write_csv(std::ostream& out, const Matrix& values,
               const std::vector<std::string>& column_names, const Mask* mask = nullptr);
void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& column_names, const Mask* mask = nullptr);

}  // namespace mibridge
