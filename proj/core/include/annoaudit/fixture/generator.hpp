#pragma once

#include <cstdint>

#include "annoaudit/fixture/manifest.hpp"

namespace annoaudit::fixture {

struct GeneratorOptions {
  std::size_t sites = 2;
  std::size_t pages_per_site = 3;
  /// Extra annotations on URIs that are excluded before any network access.
  double excluded_rate = 0.1;
  double soft404_site_rate = 0.3;
  double timeout_rate = 0.04;
  double timemap_error_rate = 0.05;
  double broken_archive_rate = 0.15;
};

/// Random but reproducible manifest: pages with drifting versions, archive
/// holdings with cross-archive ties, live-web failures, excluded targets and
/// annotations whose quotes come from some version of their page. The
/// expected verdicts are filled in by oracle_verdicts().
FixtureManifest generate_manifest(std::uint64_t seed, const GeneratorOptions& options = {});

}  // namespace annoaudit::fixture
