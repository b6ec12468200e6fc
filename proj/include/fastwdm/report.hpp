#pragma once

#include <string>

#include "fastwdm/provision.hpp"
#include "json.hpp"

namespace fastwdm {

nlohmann::json to_json(const ProvisioningReport& r);
nlohmann::json to_json(const RouteCandidate& r);

/// Link table (probe BER and line GSNR per link) followed by the channel
/// table (mode, estimate, margin, measured values) and the timing line.
std::string render_table(const ProvisioningReport& r);

/// One-line summary of a probe record.
std::string render_record(const LinkGsnrRecord& r);

}  // namespace fastwdm
