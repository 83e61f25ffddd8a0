#pragma once

// Umbrella header for the whole library.

#include "hcie/cipher.hpp"
#include "hcie/ciphertext.hpp"
#include "hcie/corpus.hpp"
#include "hcie/cpa.hpp"
#include "hcie/error.hpp"
#include "hcie/experiment.hpp"
#include "hcie/image.hpp"
#include "hcie/keystream.hpp"
#include "hcie/kpa.hpp"
#include "hcie/permutation.hpp"
#include "hcie/pgm.hpp"
#include "hcie/serial.hpp"
