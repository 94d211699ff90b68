from setuptools import find_packages, setup

setup(
    name='hardmdp',
    version='0.1.0',
    license='GNU Lesser General Public License v2.1',
    description='Hard episodic MDP instances and minimax lower-bound verification',
    long_description=open('README.md').read(),
    packages=find_packages(exclude=['tests']),
    package_data={'hardmdp': ['config_files/*.json']},
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.2',
        'psutil>=5.4.8',
        'setuptools>=39.0.1',
        'simplejson>=3.16.0,<3.19',
    ],
    extras_require={
        'test': ['pytest>=6'],
    },
    entry_points={
        'console_scripts': ['hmdp=hardmdp.cli:main'],
    },
)
