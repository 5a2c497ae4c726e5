"""
liederiv 安裝設定檔
"""
from setuptools import setup, find_packages
from pathlib import Path

# 讀取 README
readme_file = Path(__file__).parent / 'README.md'
long_description = readme_file.read_text(encoding='utf-8') if readme_file.exists() else ''

setup(
    name='liederiv',
    version='1.0.0',
    description='有限維結合代數與平凡擴張的 Lie 導子判定工具',
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='liederiv Team',
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=[
        'PyYAML==6.0.2',
        'pydantic==2.9.2',
        'sympy==1.13.3',
    ],
    extras_require={
        'dev': [
            'pytest==7.4.3',
            'pytest-cov==4.1.0',
            'pytest-mock==3.12.0',
        ],
    },
    entry_points={
        'console_scripts': [
            'liederiv=liederiv.cli:main',
        ],
    },
    python_requires='>=3.9',
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
)
