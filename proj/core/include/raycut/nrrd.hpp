#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "raycut/volume.hpp"

namespace raycut {

enum class NrrdEncoding { kRaw, kGzip };

/// Reads the supported NRRD subset: attached header, 3 dimensions,
/// raw or gzip encoding, scalar types uchar/short/ushort/int/float/double,
/// spacing from "spacings" or axis-aligned "space directions".
Volume read_nrrd(const std::filesystem::path& path);

/// Same as read_nrrd but decodes an in-memory file image.
Volume decode_nrrd(std::string_view bytes);

/// Serialises a volume in its own scalar kind. Geometry is written as
/// diagonal "space directions" plus "space origin".
std::string encode_nrrd(const Volume& vol, NrrdEncoding encoding = NrrdEncoding::kGzip);
std::string encode_nrrd_mask(const MaskVolume& mask,
                             NrrdEncoding encoding = NrrdEncoding::kGzip);

void write_nrrd(const Volume& vol, const std::filesystem::path& path,
                NrrdEncoding encoding = NrrdEncoding::kGzip);
/// Masks are stored as uchar; gzip unless asked otherwise.
void write_nrrd_mask(const MaskVolume& mask, const std::filesystem::path& path,
                     NrrdEncoding encoding = NrrdEncoding::kGzip);

/// Reads a NRRD and interprets it as a binary mask (any nonzero -> 1).
MaskVolume read_nrrd_mask(const std::filesystem::path& path);

}  // namespace raycut
