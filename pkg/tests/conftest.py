"""
pytest 全局配置文件
定义全局 fixtures 和配置
"""

from pathlib import Path

import pytest

from app.pipeline.synth import build_spec, generate, write_scenario
from app.schemas.synth import FaultKind, GroundTruth, ScenarioSpec

# ============ Pytest 配置 ============


def pytest_configure(config):
    """pytest 启动时的配置"""
    # 禁用loguru日志以提高测试速度
    from loguru import logger

    logger.disable("")


# ============ 合成场景 Fixtures ============


@pytest.fixture(scope="session")
def small_spec() -> ScenarioSpec:
    """两台机器（一台渐变、一台突变）的小场景"""
    return build_spec(
        seed=7,
        n_machines=2,
        days=40,
        K=3,
        n_codes=30,
        n_relevant=4,
        fault_kind=FaultKind.MIXED,
        fault_day=32,
        lead_days=5,
        ramp_days=10,
    )


@pytest.fixture(scope="session")
def small_scenario(small_spec):
    """(Dataset, GroundTruth)，整个测试会话共享"""
    return generate(small_spec)


@pytest.fixture(scope="session")
def scenario_dir(tmp_path_factory, small_scenario) -> Path:
    """写出到磁盘的小场景：logs.csv、sensors.csv、labels.csv、truth.json"""
    directory = tmp_path_factory.mktemp("scenario")
    dataset, truth = small_scenario
    write_scenario(dataset, truth, directory)
    return directory


@pytest.fixture(scope="session")
def small_truth(small_scenario) -> GroundTruth:
    return small_scenario[1]
