# Copyright 2026 The copyctl Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Copy-controlled beam search and extractiveness metrics.

Decoding options are passed as keyword arguments using the same keys as the
command-line config file (mode, m_star, eta0, beam_size, max_len, ...).
"""

import json

from ._copyctl import (
    CopyctlError,
    ModelOutputError,
    ScriptedModel,
    copy_penalty,
    eta_at,
    extend_vocabulary,
    generate_corpus,
    load_scripted,
    mix,
    naive_overlap,
    ngram_overlap,
    overlap_profile,
    parse_scripted,
    rouge_l,
    rouge_n,
)
from . import _copyctl

__all__ = [
    "CopyctlError",
    "ModelOutputError",
    "ScriptedModel",
    "copy_penalty",
    "decode_corpus",
    "decode_scripted",
    "decode_synthetic",
    "eta_at",
    "exhaustive_decode",
    "extend_vocabulary",
    "generate_corpus",
    "load_scripted",
    "mix",
    "naive_overlap",
    "ngram_overlap",
    "overlap_profile",
    "parse_scripted",
    "rouge_l",
    "rouge_n",
]


def _tokens(text):
    return text.split() if isinstance(text, str) else list(text)


def decode_scripted(model, doc_id, **config):
    """Best hypothesis of a scripted model for one of its source documents."""
    return model._decode(doc_id, json.dumps(config))


def exhaustive_decode(model, doc_id, **config):
    """Brute-force best sequence of a scripted model, for small spaces only."""
    return model._exhaustive(doc_id, json.dumps(config))


def decode_synthetic(article, **config):
    """Decode one article with the synthetic copy model."""
    return _copyctl._decode_synthetic(_tokens(article), json.dumps(config))


def decode_corpus(records, **config):
    """Decode corpus records and return {"report": ..., "documents": [...]}."""
    rows = [(r["id"], r["article"], r["reference"]) for r in records]
    return json.loads(_copyctl._run_decode(rows, json.dumps(config)))
