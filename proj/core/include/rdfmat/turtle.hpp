#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rdfmat/mapping.hpp"

namespace rdfmat {

/// Parse a mapping document (Turtle subset + RML vocabulary) into a fully
/// resolved mapping set. Unsupported constructs raise MappingParseError with
/// file/line/column; nothing is dropped silently.
DataIntegrationSystem parse_mapping(std::string_view document,
                                    std::string_view filename = "<string>");

/// Parse a mapping file; relative source paths resolve against its directory.
DataIntegrationSystem parse_mapping_file(const std::filesystem::path& path);

} // namespace rdfmat
