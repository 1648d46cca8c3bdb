#pragma once

#include "revival/atom.hpp"
#include "revival/compare.hpp"
#include "revival/entanglement.hpp"
#include "revival/errors.hpp"
#include "revival/fock.hpp"
#include "revival/params.hpp"
#include "revival/phase.hpp"
#include "revival/quantum.hpp"
#include "revival/rng.hpp"
#include "revival/semiclassical.hpp"
#include "revival/separable.hpp"
