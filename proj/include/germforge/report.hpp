#pragma once

#include "germforge/distance.hpp"
#include "germforge/germ_io.hpp"
#include "germforge/mond.hpp"
#include "germforge/normal_form.hpp"

namespace germforge {

/// {"order", "mode", "b": {"2": ...}, "a": {"2,0": ...}, "germ": [x, y, z]}
Json normal_form_json(const NormalFormCoeffs& nf);

/// Label, tag, k, sign, corank, 2-jet type and the B_k trace when there is one.
Json class_json(const GermClassification& c);

Json trace_json(const BkRecursionTrace& t);

Json flags_json(const GeometricFlags& f);
Json expected_json(const ExpectedVerdict& e);
Json geometric_json(const GeometricVerdict& g);

}  // namespace germforge
