#pragma once

#include <map>
#include <string>

#include "annoaudit/fixture/manifest.hpp"

namespace annoaudit::fixture {

/// Expected category of every manifest annotation, worked out directly from
/// the manifest contents without any HTTP, parsing or text normalization.
///
/// Relies on the generator's guarantees: excluded targets are "urn:" or
/// loopback URIs, page text is ASCII with single spaces, and quotes never
/// straddle markup.
std::map<std::string, Category> oracle_verdicts(const FixtureManifest& m);

}  // namespace annoaudit::fixture
