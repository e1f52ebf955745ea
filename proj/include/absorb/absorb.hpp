#pragma once

#include <absorb/combinatorics.hpp>
#include <absorb/divide.hpp>
#include <absorb/embed.hpp>
#include <absorb/errors.hpp>
#include <absorb/exactcover.hpp>
#include <absorb/fraclp.hpp>
#include <absorb/gadgets.hpp>
#include <absorb/hypercore.hpp>
#include <absorb/integral.hpp>
#include <absorb/io.hpp>
#include <absorb/nibble.hpp>
#include <absorb/omni.hpp>
#include <absorb/pipeline.hpp>
#include <absorb/rng.hpp>
#include <absorb/steiner.hpp>
#include <absorb/tuple.hpp>
