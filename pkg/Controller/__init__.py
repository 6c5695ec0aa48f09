# Controller/__init__.py

# 匯入各命令群組
from Controller.TraceController import register as register_trace
from Controller.FringeController import register as register_fringe
from Controller.SurfaceController import register as register_surface
from Controller.SamplerController import register as register_sampler

# 註冊子命令的函數
def register_commands(subparsers, common):
    """註冊所有控制器的子命令到 argparse"""
    register_trace(subparsers, common)     # trace / chi / pi / bounds
    register_fringe(subparsers, common)    # fringe / subgroup-fix
    register_surface(subparsers, common)   # surface-test
    register_sampler(subparsers, common)   # sample / oracle / decay
