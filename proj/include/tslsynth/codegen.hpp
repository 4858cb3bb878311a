#pragma once

#include <map>
#include <optional>
#include <string>

#include "tslsynth/cfm.hpp"

namespace tslsynth {

struct CodegenOptions {
  std::string module_name = "Controller";
  std::string dialect = "yampa";
};

/// Renders the CFM as an arrowized FRP signal function: `loopD` feedback
/// around a guard cascade with one branch per CFM row.
std::string generate_frp(const Cfm& cfm, const CodegenOptions& opts = {});

/// Number of guard branches emitted by generate_frp.
std::size_t count_conditionals(const Cfm& cfm);

/// Host identifiers for every name of the CFM, in generation order.
std::map<std::string, std::string> frp_names(const Cfm& cfm);

/// Bracket balance and guard-cascade shape check; returns an error message
/// or nothing when the text is well formed.
std::optional<std::string> validate_frp(const std::string& text);

}  // namespace tslsynth
