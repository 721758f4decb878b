name = "selfnorm"
