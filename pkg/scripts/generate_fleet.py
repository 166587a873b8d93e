"""
生成基准机群脚本

生成 12 台机器（渐变与突变故障各半）的合成数据集并写出评估所需的全部输入
"""

import sys
from pathlib import Path

# 添加项目根目录到 Python 路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from loguru import logger

from app.pipeline.synth import build_spec, generate, write_scenario
from app.schemas.synth import FaultKind


def main(output_dir: Path = Path("output/fleet"), seed: int = 0) -> None:
    """主函数"""
    logger.info(f"🏭 开始生成机群数据 seed={seed} ...")

    try:
        spec = build_spec(seed=seed, n_machines=12, fault_kind=FaultKind.MIXED)
        dataset, truth = generate(spec)
        paths = write_scenario(dataset, truth, output_dir)
        logger.info(f"✅ 机群数据已写出: {', '.join(path.name for path in paths)}")
        logger.info(
            f"   下一步: logsel evaluate --logs {output_dir}/logs.csv "
            f"--sensors {output_dir}/sensors.csv --labels {output_dir}/labels.csv"
        )
    except Exception as e:
        logger.error(f"❌ 机群数据生成失败: {e}")
        raise


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("output/fleet"))
