"""
流水线模块

ingest → vectorize → detectors → relevance → redundancy → countmatrix → knn → evaluation，
以及用于基准测试的 synth
"""
