"""Column-store string dictionaries hashed with MMH (shift-XOR) or Jenkins lookup3."""

from csdict._kernels import BACKEND
from csdict.colstore import Column, ColumnKind, Relation, load_tbl, relation_create
from csdict.costmodel import (SeekParams, SelectivityStats, pdf, seeks_scanned_segment,
                              seeks_with_remainder, selectivity)
from csdict.errors import ContractViolation, ParseError, ResourceError
from csdict.hashcore import (HashFunctionId, HashQualityReport, bucket_of, jenkins_hash,
                             mmh_hash, mmh_update, quality_report)
from csdict.strheap import StringHeap, heap_alloc

__version__ = "0.1.0"
