#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "conglab/certificates.hpp"
#include "conglab/qseries.hpp"

// File formats: the self-describing series cache record and the one-per-line
// certificate records.  Key order is fixed so identical runs produce
// byte-identical files.

namespace conglab::records {

using json = nlohmann::ordered_json;

using AnySeries = std::variant<qseries::IntSeries, qseries::ModSeries>;

json series_to_json(const qseries::IntSeries& s);
json series_to_json(const qseries::ModSeries& s);
AnySeries series_from_json(const json& j);

void write_series_file(const std::string& path, const AnySeries& s);
AnySeries read_series_file(const std::string& path);

json certificate_to_json(const CongruenceCertificate& c);
CongruenceCertificate certificate_from_json(const json& j);

/// Newline-delimited records.
void write_certificates(std::ostream& os, const std::vector<CongruenceCertificate>& certs);
std::vector<CongruenceCertificate> read_certificates(std::istream& is);

} // namespace conglab::records
