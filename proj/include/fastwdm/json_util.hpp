#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

namespace fastwdm::jsonutil {

using nlohmann::json;

/// Rejects keys outside `allowed` (strict schema). `where` names the object
/// in the error message.
void require_keys_subset(const json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view where);

const json& required(const json& object, std::string_view key, std::string_view where);
double number(const json& object, std::string_view key, std::string_view where);
double number_or(const json& object, std::string_view key, double fallback, std::string_view where);
std::string string(const json& object, std::string_view key, std::string_view where);

}  // namespace fastwdm::jsonutil
