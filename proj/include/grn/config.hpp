#pragma once

#include <map>
#include <string>
#include <vector>

#include "grn/training.hpp"

namespace grn {

/// Flat "key = value" text; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& source);

/// Applies one TrainConfig key (same names as the struct fields). Unknown
/// keys and unparsable values throw DataError.
void apply_config_key(TrainConfig& cfg, const std::string& key, const std::string& value);

TrainConfig load_train_config(const std::string& path, TrainConfig base = {});

/// The keys apply_config_key understands, in documentation order.
const std::vector<std::string>& train_config_keys();

}  // namespace grn
