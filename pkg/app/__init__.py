"""
logsel 应用包初始化。

保持空文件即可让 mypy 和 Python 正确识别 `app` 包。
"""
