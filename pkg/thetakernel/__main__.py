from thetakernel.main import main

main()
